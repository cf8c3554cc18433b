//! File formats for coverings.
//!
//! Lattice coverings: JSON `{"lattices": [{"c": .., "d": .., "n": ..}, ..]}`
//! or text with one `c:d;N` per line. Congruence coverings: JSON
//! `{"classes": [{"a": .., "n": ..}, ..]}` or text with one `a mod N` per
//! line. Blank lines and `#` comments are ignored in text input. Output is
//! always canonical, so parse followed by print is a fixed point.

use serde::{Deserialize, Serialize};

use crate::congruence::{CongruenceCovering, ResidueClass};
use crate::covering::Covering;
use crate::error::{Error, Result};
use crate::lattice::{CocyclicLattice, LatticeRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringFile {
    pub lattices: Vec<LatticeRecord>,
}

impl From<&Covering> for CoveringFile {
    fn from(c: &Covering) -> Self {
        CoveringFile { lattices: c.lattices().iter().map(CocyclicLattice::record).collect() }
    }
}

impl CoveringFile {
    pub fn to_covering(&self) -> Result<Covering> {
        let ls = self.lattices.iter().map(CocyclicLattice::from_record).collect::<Result<Vec<_>>>()?;
        Covering::new(ls)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub a: i64,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceFile {
    pub classes: Vec<ClassRecord>,
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
}

fn looks_like_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

/// Parses a lattice covering in either format.
pub fn parse_covering(text: &str) -> Result<Covering> {
    if looks_like_json(text) {
        let file: CoveringFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        return file.to_covering();
    }
    let ls = content_lines(text)
        .flat_map(|l| l.split(',').map(str::trim).filter(|s| !s.is_empty()))
        .map(str::parse::<CocyclicLattice>)
        .collect::<Result<Vec<_>>>()?;
    Covering::new(ls)
}

pub fn covering_to_text(c: &Covering) -> String {
    c.lattices().iter().map(|l| format!("{l}\n")).collect()
}

pub fn covering_to_json(c: &Covering) -> String {
    serde_json::to_string(&CoveringFile::from(c)).expect("serializable")
}

/// Parses a congruence covering in either format.
pub fn parse_congruence(text: &str) -> Result<CongruenceCovering> {
    if looks_like_json(text) {
        let file: CongruenceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let classes = file
            .classes
            .iter()
            .map(|r| ResidueClass::new(r.a, r.n))
            .collect::<Result<Vec<_>>>()?;
        return CongruenceCovering::new(classes);
    }
    let classes = content_lines(text)
        .map(str::parse::<ResidueClass>)
        .collect::<Result<Vec<_>>>()?;
    CongruenceCovering::new(classes)
}

pub fn congruence_to_text(c: &CongruenceCovering) -> String {
    c.classes().iter().map(|r| format!("{r}\n")).collect()
}

pub fn congruence_to_json(c: &CongruenceCovering) -> String {
    let file = CongruenceFile {
        classes: c.classes().iter().map(|r| ClassRecord { a: r.residue() as i64, n: r.modulus() }).collect(),
    };
    serde_json::to_string(&file).expect("serializable")
}
