//! Exhaustive enumeration of minimal coverings of a given size.
//!
//! For each admissible index lcm `N` the search works on the points of
//! P1(Z/N). At every step it takes the least uncovered point and branches
//! over the lattices (of index dividing `N`) through it. Every irredundant
//! covering is reached this way: each member keeps a private point, so some
//! member always contains the least point not yet covered. Branches die as
//! soon as a chosen lattice loses its last private point, or when the
//! remaining budget of lattices cannot cover what is left.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{self, divisors};
use crate::covering::{self, Covering, RefinementTree};
use crate::error::{Error, Result};
use crate::lattice::{self, CocyclicLattice};
use crate::projline::{self, coprime_rep, wedge, Vector};

/// Index lcms a minimal covering of size `n` can have.
///
/// Keeps `N` with `G(N) <= n - 1`; a prime power `p^e` additionally needs
/// `n == 2 (mod p - 1)` and `n >= e(p - 1) + 2`. `N = 1` only for `n = 1`.
pub fn candidate_lcms(n: usize) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![1];
    }
    let (n, budget) = (n as u64, n as u64 - 1);
    // G(N) > log2(N), so N < 2^budget.
    let mut out: Vec<u64> = (2..1u64 << budget.min(40))
        .filter(|&m| arith::g_of(m) <= budget)
        .collect();
    out.retain(|&m| {
        let f = arith::factorize(m).expect("m >= 1");
        match *f.entries() {
            [(p, e)] => n % (p - 1) == 2 % (p - 1) && n >= u64::from(e) * (p - 1) + 2,
            _ => true,
        }
    });
    out.sort_unstable();
    out
}

/// Search settings for [`enumerate_minimal`].
#[derive(Debug, Clone, Default)]
pub struct EnumerateOptions {
    pub only_strongly_minimal: bool,
    pub fixed_lcm: Option<u64>,
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
    /// Keep the full list of coverings in the report.
    pub keep_coverings: bool,
}

/// One line of an enumeration table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub structure: String,
    pub multiplicity: usize,
    pub strongly_minimal: bool,
}

/// Grouped result of an enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub size: usize,
    pub rows: Vec<ReportRow>,
    pub total: usize,
    pub total_strongly_minimal: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverings: Option<Vec<crate::io::CoveringFile>>,
}

/// The lattices of index dividing `N` (and > 1) and their fibers in P1(Z/N).
struct SearchSpace {
    n: u64,
    lattices: Vec<CocyclicLattice>,
    fibers: Vec<Vec<u32>>,
    through: Vec<Vec<u32>>,
    reps: Vec<Vector>,
    max_fiber: usize,
}

impl SearchSpace {
    fn new(n: u64) -> Self {
        let points = projline::points(n);
        let mut lattices = Vec::new();
        let mut ids = HashMap::new();
        for m in divisors(n).expect("n >= 1").into_iter().filter(|&m| m > 1) {
            for l in lattice::full_covering_lattices(m) {
                ids.insert(l, lattices.len() as u32);
                lattices.push(l);
            }
        }
        let mut fibers = vec![Vec::new(); lattices.len()];
        let mut through = vec![Vec::new(); points.len()];
        let divs: Vec<u64> = divisors(n).expect("n >= 1").into_iter().filter(|&m| m > 1).collect();
        for (i, x) in points.iter().enumerate() {
            let here = CocyclicLattice::new(*x);
            for &m in &divs {
                let id = ids[&here.ancestor_unchecked(m)];
                fibers[id as usize].push(i as u32);
                through[i].push(id);
            }
        }
        let max_fiber = fibers.iter().map(Vec::len).max().unwrap_or(0);
        let reps = points.iter().map(coprime_rep).collect();
        SearchSpace { n, lattices, fibers, through, reps, max_fiber }
    }
}

struct Search<'a> {
    space: &'a SearchSpace,
    size: usize,
    only_strong: bool,
    count: Vec<u8>,
    owner_sum: Vec<u32>,
    private: Vec<u32>,
    chosen: Vec<u32>,
    starved: usize,
    uncovered: usize,
    found: Vec<Covering>,
}

impl<'a> Search<'a> {
    fn new(space: &'a SearchSpace, size: usize, only_strong: bool) -> Self {
        let points = space.through.len();
        Search {
            space,
            size,
            only_strong,
            count: vec![0; points],
            owner_sum: vec![0; points],
            private: vec![0; space.lattices.len()],
            chosen: Vec::with_capacity(size),
            starved: 0,
            uncovered: points,
            found: Vec::new(),
        }
    }

    fn overlaps(&self, id: u32) -> bool {
        self.space.fibers[id as usize].iter().any(|&x| self.count[x as usize] > 0)
    }

    fn add(&mut self, id: u32) {
        for &x in &self.space.fibers[id as usize] {
            let x = x as usize;
            match self.count[x] {
                0 => {
                    self.private[id as usize] += 1;
                    self.uncovered -= 1;
                }
                1 => {
                    let owner = self.owner_sum[x] as usize;
                    self.private[owner] -= 1;
                    if self.private[owner] == 0 {
                        self.starved += 1;
                    }
                }
                _ => {}
            }
            self.count[x] += 1;
            self.owner_sum[x] += id;
        }
        self.chosen.push(id);
    }

    fn remove(&mut self, id: u32) {
        self.chosen.pop();
        for &x in &self.space.fibers[id as usize] {
            let x = x as usize;
            self.count[x] -= 1;
            self.owner_sum[x] -= id;
            match self.count[x] {
                0 => {
                    self.private[id as usize] -= 1;
                    self.uncovered += 1;
                }
                1 => {
                    let owner = self.owner_sum[x] as usize;
                    if self.private[owner] == 0 {
                        self.starved -= 1;
                    }
                    self.private[owner] += 1;
                }
                _ => {}
            }
        }
    }

    fn run(&mut self, start: usize) {
        let k = self.chosen.len();
        if self.uncovered == 0 {
            if k == self.size {
                self.accept();
            }
            return;
        }
        let remaining = self.size - k;
        if remaining == 0 || self.uncovered > remaining * self.space.max_fiber {
            return;
        }
        let x = (start..self.count.len())
            .find(|&i| self.count[i] == 0)
            .expect("uncovered point exists");
        for idx in 0..self.space.through[x].len() {
            let id = self.space.through[x][idx];
            if self.only_strong && self.overlaps(id) {
                continue;
            }
            self.add(id);
            if self.starved == 0 {
                self.run(x + 1);
            }
            self.remove(id);
        }
    }

    fn accept(&mut self) {
        let space = self.space;
        let lcm = self
            .chosen
            .iter()
            .fold(1u64, |acc, &id| acc.lcm(&space.lattices[id as usize].index()));
        if lcm != space.n {
            return;
        }
        for &id in &self.chosen {
            let mut s = space.fibers[id as usize]
                .iter()
                .filter(|&&x| self.count[x as usize] == 1)
                .map(|&x| space.reps[x as usize]);
            let v = s.next().expect("irredundant");
            let d = s.fold(space.n as i64, |g, w| g.gcd(&wedge(v, w)));
            if d as u64 != space.lattices[id as usize].index() {
                return;
            }
        }
        let c = Covering::new(self.chosen.iter().map(|&id| space.lattices[id as usize]))
            .expect("nonempty");
        self.found.push(c);
    }
}

/// All minimal coverings of size exactly `n`, in canonical order.
pub fn enumerate_minimal_coverings(n: usize, opts: &EnumerateOptions) -> Vec<Covering> {
    if n == 0 {
        return Vec::new();
    }
    let lcms: Vec<u64> = candidate_lcms(n)
        .into_iter()
        .filter(|&m| opts.fixed_lcm.is_none_or(|f| f == m))
        .collect();
    if n == 1 {
        return if lcms.contains(&1) { vec![Covering::trivial()] } else { Vec::new() };
    }
    let spaces: Vec<SearchSpace> = lcms.iter().map(|&m| SearchSpace::new(m)).collect();
    let tasks: Vec<(usize, u32)> = spaces
        .iter()
        .enumerate()
        .flat_map(|(s, space)| space.through[0].iter().map(move |&id| (s, id)))
        .collect();

    let work = || -> BTreeSet<Covering> {
        tasks
            .par_iter()
            .map(|&(s, id)| {
                let mut search = Search::new(&spaces[s], n, opts.only_strongly_minimal);
                search.add(id);
                search.run(1);
                search.found
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    let found = match opts.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    };
    found.into_iter().collect()
}

/// Enumerates and groups the minimal coverings of size `n` by structure.
pub fn enumerate_minimal(n: usize, opts: &EnumerateOptions) -> EnumerationReport {
    let coverings = enumerate_minimal_coverings(n, opts);
    build_report(n, &coverings, opts.keep_coverings)
}

pub(crate) fn build_report(n: usize, coverings: &[Covering], keep: bool) -> EnumerationReport {
    let mut groups: BTreeMap<(bool, Label), usize> = BTreeMap::new();
    let mut total_strong = 0;
    for c in coverings {
        let strong = covering::has_unit_weight(c);
        total_strong += usize::from(strong);
        *groups.entry((!strong, structure_label(c))).or_default() += 1;
    }
    let rows = groups
        .into_iter()
        .map(|((weak, label), multiplicity)| ReportRow {
            structure: label.to_string(),
            multiplicity,
            strongly_minimal: !weak,
        })
        .collect();
    EnumerationReport {
        size: n,
        rows,
        total: coverings.len(),
        total_strongly_minimal: total_strong,
        coverings: keep.then(|| coverings.iter().map(crate::io::CoveringFile::from).collect()),
    }
}

/// Bracketed index structure, as in `(2,2,(4,4))`.
///
/// Siblings are sorted: plain indices before groups, indices numerically,
/// groups lexicographically by their members.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Index(u64),
    Group(Vec<Label>),
}

impl Label {
    fn from_tree(t: &RefinementTree) -> Label {
        match t {
            RefinementTree::Leaf(l) => Label::Index(l.index()),
            RefinementTree::Node { children, .. } => {
                let mut kids: Vec<Label> = children.iter().map(Label::from_tree).collect();
                kids.sort();
                Label::Group(kids)
            }
        }
    }

    /// Re-sorts all sibling lists.
    pub fn canonical(self) -> Label {
        match self {
            Label::Index(_) => self,
            Label::Group(kids) => {
                let mut kids: Vec<Label> = kids.into_iter().map(Label::canonical).collect();
                kids.sort();
                Label::Group(kids)
            }
        }
    }

    /// The flat sorted index list.
    pub fn indices(&self) -> Vec<u64> {
        let mut out = Vec::new();
        fn walk(l: &Label, out: &mut Vec<u64>) {
            match l {
                Label::Index(n) => out.push(*n),
                Label::Group(kids) => kids.iter().for_each(|k| walk(k, out)),
            }
        }
        walk(self, &mut out);
        out.sort_unstable();
        out
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Index(n) => write!(f, "{n}"),
            Label::Group(kids) => {
                write!(f, "(")?;
                for (i, k) in kids.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{k}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        fn parse(chars: &[char], pos: &mut usize) -> Result<Label> {
            let err = |pos: usize| Error::Parse(format!("bad structure label at {pos}"));
            match chars.get(*pos) {
                Some('(') => {
                    *pos += 1;
                    let mut kids = vec![parse(chars, pos)?];
                    loop {
                        match chars.get(*pos) {
                            Some(',') => {
                                *pos += 1;
                                kids.push(parse(chars, pos)?);
                            }
                            Some(')') => {
                                *pos += 1;
                                return Ok(Label::Group(kids));
                            }
                            _ => return Err(err(*pos)),
                        }
                    }
                }
                Some(c) if c.is_ascii_digit() => {
                    let start = *pos;
                    while chars.get(*pos).is_some_and(|c| c.is_ascii_digit()) {
                        *pos += 1;
                    }
                    let text: String = chars[start..*pos].iter().collect();
                    text.parse().map(Label::Index).map_err(|_| err(start))
                }
                _ => Err(err(*pos)),
            }
        }
        let mut pos = 0;
        let label = parse(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(label.canonical())
    }
}

fn structure_label(c: &Covering) -> Label {
    match covering::refinement_structure(c) {
        Some(RefinementTree::Leaf(_)) => Label::Group(vec![Label::Index(1)]),
        Some(t) => Label::from_tree(&t),
        None => Label::Group(c.index_sequence().into_iter().map(Label::Index).collect()),
    }
}

/// Bracketed refinement structure if the covering refines `{Z^2}`,
/// otherwise the sorted index list.
pub fn classify(c: &Covering) -> String {
    structure_label(c).to_string()
}

/// The three explicit families of minimal coverings with index lcm `pq`.
#[derive(Debug, Clone)]
pub struct PqFamilies {
    /// Size `p + q + 1`: one refinement of a full prime covering. Strongly minimal.
    pub refinements: Vec<Covering>,
    /// Size `p + q + 2`: all but two lattices of each prime index, plus four of index `pq`.
    pub all_but_two: Vec<Covering>,
    /// Size `pq + 2`: one lattice of each prime index plus the `pq` lattices they miss.
    pub one_of_each: Vec<Covering>,
}

pub fn lcm_pq_families(p: u64, q: u64) -> Result<PqFamilies> {
    lattice::require_prime(p)?;
    lattice::require_prime(q)?;
    if p == q {
        return Err(Error::SamePrimes(p));
    }
    let lp = lattice::full_covering_lattices(p);
    let lq = lattice::full_covering_lattices(q);
    let lpq = lattice::full_covering_lattices(p * q);
    let full_p = Covering::new(lp.clone())?;
    let full_q = Covering::new(lq.clone())?;

    let mut refinements = Vec::new();
    for l in &lp {
        refinements.push(covering::p_refine(&full_p, l, q)?);
    }
    for l in &lq {
        refinements.push(covering::p_refine(&full_q, l, p)?);
    }

    let pairs = |ls: &[CocyclicLattice]| -> Vec<(usize, usize)> {
        (0..ls.len()).flat_map(|i| (i + 1..ls.len()).map(move |j| (i, j))).collect()
    };
    let mut all_but_two = Vec::new();
    for (a1, a2) in pairs(&lp) {
        for (b1, b2) in pairs(&lq) {
            let keep_p = lp.iter().enumerate().filter(|&(i, _)| i != a1 && i != a2).map(|(_, l)| *l);
            let keep_q = lq.iter().enumerate().filter(|&(i, _)| i != b1 && i != b2).map(|(_, l)| *l);
            let corners = lpq.iter().copied().filter(|l| {
                let (x, y) = (l.ancestor_unchecked(p), l.ancestor_unchecked(q));
                (x == lp[a1] || x == lp[a2]) && (y == lq[b1] || y == lq[b2])
            });
            all_but_two.push(Covering::new(keep_p.chain(keep_q).chain(corners))?);
        }
    }

    let mut one_of_each = Vec::new();
    for a in &lp {
        for b in &lq {
            let rest = lpq
                .iter()
                .copied()
                .filter(|l| l.ancestor_unchecked(p) != *a && l.ancestor_unchecked(q) != *b);
            one_of_each.push(Covering::new([*a, *b].into_iter().chain(rest))?);
        }
    }

    let ok = refinements.iter().all(covering::is_strongly_minimal)
        && all_but_two.iter().chain(&one_of_each).all(|c| covering::is_minimal(c) && !covering::is_strongly_minimal(c));
    if !ok {
        return Err(Error::Invalid(format!("family construction for ({p}, {q}) failed verification")));
    }
    for family in [&mut refinements, &mut all_but_two, &mut one_of_each] {
        family.sort();
    }
    Ok(PqFamilies { refinements, all_but_two, one_of_each })
}

impl EnumerationReport {
    /// Aligned text table: structure, multiplicity, strongly minimal.
    pub fn to_table(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.structure.len())
            .chain([26])
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        out.push_str(&format!("size {}\n", self.size));
        out.push_str(&format!("{:<width$} | {:>12} | strongly minimal?\n", "index structure", "multiplicity"));
        out.push_str(&format!("{}\n", "-".repeat(width + 35)));
        let mut write_block = |strong: bool, title: &str, total: usize| {
            let rows: Vec<_> = self.rows.iter().filter(|r| r.strongly_minimal == strong).collect();
            if rows.is_empty() {
                return;
            }
            for r in rows {
                out.push_str(&format!(
                    "{:<width$} | {:>12} | {}\n",
                    r.structure,
                    r.multiplicity,
                    if strong { "yes" } else { "no" }
                ));
            }
            out.push_str(&format!("{:<width$} | {:>12} |\n", title, total));
        };
        write_block(true, "total strongly minimal", self.total_strongly_minimal);
        write_block(false, "total not strongly minimal", self.total - self.total_strongly_minimal);
        out.push_str(&format!("{:<width$} | {:>12} |\n", "total", self.total));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("structure,multiplicity,strongly_minimal\n");
        for r in &self.rows {
            out.push_str(&format!("\"{}\",{},{}\n", r.structure, r.multiplicity, r.strongly_minimal));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Orders labels as the table rows are ordered; exposed for callers that
/// compare reports against reference tables.
pub fn compare_labels(a: &str, b: &str) -> Ordering {
    match (a.parse::<Label>(), b.parse::<Label>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}
