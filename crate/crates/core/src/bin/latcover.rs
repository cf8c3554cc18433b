use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use latcover::congruence;
use latcover::covering::{self, Covering};
use latcover::enumerate::{self, EnumerateOptions};
use latcover::{arith, io, CocyclicLattice};

#[derive(Parser)]
#[command(name = "latcover", version, about = "Coverings of Z^2 by cocyclic sublattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report covering, irredundancy, minimality and related facts for a covering file.
    Verify { file: PathBuf },
    /// Replace one member by its q-descendants and print the result.
    Refine {
        file: PathBuf,
        /// Member to refine, written `c:d;N`.
        #[arg(long)]
        member: String,
        #[arg(long)]
        prime: u64,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print the refinement structure label.
    Classify { file: PathBuf },
    /// Enumerate all minimal coverings of a given size.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        strongly_minimal: bool,
        #[arg(long)]
        lcm: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Write every covering found to this JSON file.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Index multisets of size n with weight 1 realisable by P1 orbits.
    WeightSolutions {
        #[arg(long)]
        size: usize,
    },
    /// Covering systems of congruences.
    Congruence {
        #[command(subcommand)]
        command: CongruenceCommand,
    },
}

#[derive(Subcommand)]
enum CongruenceCommand {
    Verify { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<Covering, String> {
    io::parse_covering(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn verify(c: &Covering) -> bool {
    let is_cov = covering::is_covering(c);
    println!("lattices: {}", c.len());
    println!("lcm: {}", c.lcm());
    println!("weight: {}", c.weight());
    println!("covering: {}", yes(is_cov));
    if !is_cov {
        return false;
    }
    let irredundant = covering::is_irredundant(c).unwrap_or(false);
    println!("irredundant: {}", yes(irredundant));
    println!("minimal: {}", yes(covering::is_minimal(c)));
    println!("strongly minimal: {}", yes(covering::is_strongly_minimal(c)));
    let bound = 1 + arith::big_g(c.lcm()).expect("lcm >= 1") as usize;
    println!("simpson bound: {} (size {} >= {bound})", yes(c.len() >= bound), c.len());
    if irredundant {
        for l in c.lattices() {
            if let Ok(w) = covering::minimality_witness(c, l) {
                if !w.is_minimal() {
                    println!("non-minimal member {l}: private points lie in index {}", w.d);
                }
            }
        }
    }
    if let Some(tree) = covering::refinement_structure(c) {
        println!("refinement: {}", enumerate::classify(c));
        debug_assert!(tree.is_well_formed());
    } else {
        println!("refinement: none");
    }
    true
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Verify { file } => Ok(verify(&load(&file)?)),
        Command::Refine { file, member, prime, json } => {
            let c = load(&file)?;
            let l: CocyclicLattice = member.parse().map_err(|e| format!("{e}"))?;
            let r = covering::p_refine(&c, &l, prime).map_err(|e| format!("{e}"))?;
            if json {
                println!("{}", io::covering_to_json(&r));
            } else {
                print!("{}", io::covering_to_text(&r));
            }
            Ok(true)
        }
        Command::Classify { file } => {
            let c = load(&file)?;
            println!("{}", enumerate::classify(&c));
            Ok(covering::refinement_structure(&c).is_some())
        }
        Command::Enumerate { size, strongly_minimal, lcm, format, dump, workers } => {
            if size == 0 {
                return Err("size must be positive".into());
            }
            let opts = EnumerateOptions {
                only_strongly_minimal: strongly_minimal,
                fixed_lcm: lcm,
                workers,
                keep_coverings: dump.is_some(),
            };
            let mut report = enumerate::enumerate_minimal(size, &opts);
            if let Some(path) = dump {
                let all = report.coverings.take().unwrap_or_default();
                let text = serde_json::to_string_pretty(&all).map_err(|e| e.to_string())?;
                fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            match format {
                Format::Table => print!("{}", report.to_table()),
                Format::Json => println!("{}", report.to_json()),
                Format::Csv => print!("{}", report.to_csv()),
            }
            Ok(true)
        }
        Command::WeightSolutions { size } => {
            if size == 0 {
                return Err("size must be positive".into());
            }
            let sols = arith::solve_weight_equation(size, size > 1);
            for s in &sols {
                let idx: Vec<String> = s.iter().map(u64::to_string).collect();
                let note = if arith::has_coprime_pair(s) { "  coprime pair" } else { "" };
                println!("({}){note}", idx.join(","));
            }
            println!("solutions: {}", sols.len());
            Ok(true)
        }
        Command::Congruence { command: CongruenceCommand::Verify { file } } => {
            let c = io::parse_congruence(&read(&file)?).map_err(|e| format!("{}: {e}", file.display()))?;
            let is_cov = congruence::cc_is_covering(&c);
            println!("classes: {}", c.classes().len());
            println!("lcm: {}", c.lcm());
            println!("weight: {}", c.weight());
            println!("covering: {}", yes(is_cov));
            if is_cov {
                println!("irredundant: {}", yes(congruence::cc_is_irredundant(&c)));
                println!("minimal: {}", yes(congruence::cc_is_minimal(&c)));
                println!("strongly minimal: {}", yes(congruence::cc_is_strongly_minimal(&c)));
                println!("simpson bound: {}", yes(congruence::cc_simpson_bound(&c)));
            }
            Ok(is_cov)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
