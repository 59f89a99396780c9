//! `qpoly`: command-line front end for quiver-polyhedron files.
//!
//! Exit codes: 0 success/consistent, 1 inconsistency detected (with a
//! `VERDICT:` line), 2 invalid input, 3 unsupported topology. Output
//! contains no ANSI escapes, so `NO_COLOR` is honored trivially.

use clap::{Parser, Subcommand, ValueEnum};
use qpoly::consistency::{
    algebraic_consistency_check, enumerate_perfect_matchings, find_consistent_rcharge,
    matching_polygon, rcharge_from_zigzag, ConsistencyVerdict, RCharge,
};
use qpoly::covers::{homology, quotient};
use qpoly::embed::{isoradial_embedding, svg};
use qpoly::format::{self, PolyhedronDocument};
use qpoly::grading::{find_grading, Grading};
use qpoly::rat::{format_rat, parse_rat, rat_int, Rat};
use qpoly::report::{report, Report, ReportOptions, ReportVerdict};
use qpoly::rewrite::{cancellation_check, CancelVerdict, DEFAULT_PATH_CEILING};
use qpoly::zigzag::{condition_z, zigzag_homology, zigzag_paths, ConditionZ};
use qpoly::{Error, QuiverPolyhedron};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qpoly", version, about = "Weighted quiver polyhedra: validation, Jacobi relations and consistency checks")]
struct Cli {
    /// Seed for randomized perturbations. Accepted for reproducibility;
    /// every current command is already deterministic.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RMethod {
    Lp,
    Zigzag,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a .qp file and check the polyhedron axioms.
    Validate { file: PathBuf },
    /// Print the (orbifold) Euler characteristic.
    Chi { file: PathBuf },
    /// Print the Jacobi relations, one per arrow.
    Relations { file: PathBuf },
    /// Find an R-grading with every face of degree 2.
    Grading { file: PathBuf },
    /// List the zigzag paths; with --check, decide condition Z.
    Zigzag {
        file: PathBuf,
        #[arg(long)]
        check: bool,
    },
    /// Find a consistent R-charge.
    Rcharge {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "lp")]
        method: RMethod,
    },
    /// Enumerate the perfect matchings; with --polygon, their lattice polygon.
    Matchings {
        file: PathBuf,
        #[arg(long)]
        polygon: bool,
    },
    /// Check cancellation up to an R-degree bound (default 3 face degrees).
    Cancel {
        file: PathBuf,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Bounded algebraic-consistency check on the abelian cover window.
    Consistency {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: i64,
        #[arg(long)]
        bound: Option<String>,
    },
    /// Quotient by a named free action from the file's actions block.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        action: String,
    },
    /// Write an SVG of the isoradial embedding window.
    Embed {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: i64,
        #[arg(long, value_enum, default_value = "zigzag")]
        method: RMethod,
    },
    /// Run every check and print the consistency report.
    Report {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: i64,
        #[arg(long)]
        bound: Option<String>,
        #[arg(long)]
        timings: bool,
    },
}

const EXIT_INCONSISTENT: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_TOPOLOGY: u8 = 3;

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::UnsupportedTopology(_) | Error::Weighted => EXIT_TOPOLOGY,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: format!("error: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(file: &PathBuf) -> Result<(PolyhedronDocument, QuiverPolyhedron), Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Failure {
        code: EXIT_INVALID,
        message: format!("error: cannot read {}: {e}", file.display()),
    })?;
    let doc = format::parse(&text)?;
    let qp = doc.polyhedron()?;
    Ok((doc, qp))
}

/// Explicit grading block if present, otherwise a found one.
fn grading_for(doc: &PolyhedronDocument, qp: &QuiverPolyhedron) -> Result<Grading, Failure> {
    if let Some(g) = doc.explicit_grading(qp)? {
        return Ok(g);
    }
    find_grading(qp).ok_or(Failure {
        code: EXIT_INVALID,
        message: "error: no R-grading with face degree 2 exists".into(),
    })
}

fn parse_bound(s: &Option<String>, default: Rat) -> Result<Rat, Failure> {
    match s {
        Some(s) => parse_rat(s).map_err(|e| Failure {
            code: EXIT_INVALID,
            message: format!("error: bad --bound: {e}"),
        }),
        None => Ok(default),
    }
}

fn print_rcharge(qp: &QuiverPolyhedron, r: &RCharge) {
    for (i, a) in qp.arrows.iter().enumerate() {
        println!("R({}) = {}", a.name, format_rat(&r.charge[i]));
    }
}

fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Validate { file } => {
            let (_, qp) = load(&file)?;
            println!(
                "ok: {} vertices, {} arrows, {}+{} faces, {}",
                qp.vertices.len(),
                qp.arrows.len(),
                qp.faces_plus.len(),
                qp.faces_minus.len(),
                qp.surface_topology()
            );
            Ok(0)
        }
        Command::Chi { file } => {
            let (doc, qp) = load(&file)?;
            let got = format_rat(&qp.euler_characteristic());
            println!("{got}");
            if let Some(want) = format::expected_value(&doc, "chi") {
                if want != got {
                    println!(
                        "note: recorded expectation chi = {want} differs from the formula \
                         value {got}; the formula is authoritative"
                    );
                }
            }
            Ok(0)
        }
        Command::Relations { file } => {
            let (_, qp) = load(&file)?;
            for r in qp.jacobi_relations() {
                println!(
                    "d/d{}: {} = {}",
                    qp.arrows[r.arrow].name,
                    r.lhs.display(&qp),
                    r.rhs.display(&qp)
                );
            }
            Ok(0)
        }
        Command::Grading { file } => {
            let (doc, qp) = load(&file)?;
            let g = grading_for(&doc, &qp)?;
            for (i, a) in qp.arrows.iter().enumerate() {
                println!("deg({}) = {}", a.name, format_rat(&g.charge[i]));
            }
            Ok(0)
        }
        Command::Zigzag { file, check } => {
            let (_, qp) = load(&file)?;
            let paths = zigzag_paths(&qp)?;
            let h = homology(&qp)?;
            for z in &paths {
                let names: Vec<&str> = z
                    .period
                    .iter()
                    .map(|&a| qp.arrows[a].name.as_str())
                    .collect();
                if h.genus == 1 {
                    let c = zigzag_homology(&qp, &h, z)?;
                    println!("zigzag [{}] class ({},{})", names.join(" "), c[0], c[1]);
                } else {
                    println!("zigzag [{}]", names.join(" "));
                }
            }
            if !check {
                return Ok(0);
            }
            match condition_z(&qp, &h)? {
                ConditionZ::Passes => {
                    println!("condition-Z: passes");
                    Ok(0)
                }
                ConditionZ::Fails(c) => {
                    println!(
                        "condition-Z: fails (rays from arrow {} meet again: i={}, j={}, \
                         offset=({},{}))",
                        qp.arrows[c.arrow].name, c.i, c.j, c.offset[0], c.offset[1]
                    );
                    println!("VERDICT: inconsistent (condition Z fails)");
                    Ok(EXIT_INCONSISTENT)
                }
            }
        }
        Command::Rcharge { file, method } => {
            let (_, qp) = load(&file)?;
            match method {
                RMethod::Lp => match find_consistent_rcharge(&qp) {
                    Some(r) => {
                        print_rcharge(&qp, &r);
                        Ok(0)
                    }
                    None => {
                        println!("VERDICT: inconsistent (no consistent R-charge exists)");
                        Ok(EXIT_INCONSISTENT)
                    }
                },
                RMethod::Zigzag => {
                    let h = homology(&qp)?;
                    match rcharge_from_zigzag(&qp, &h) {
                        Ok(d) => {
                            print_rcharge(&qp, &d.as_rcharge());
                            Ok(0)
                        }
                        Err(Error::ConsistencyViolation { arrow, detail }) => {
                            println!(
                                "VERDICT: inconsistent (zigzag construction fails at arrow \
                                 {arrow}: {detail})"
                            );
                            Ok(EXIT_INCONSISTENT)
                        }
                        Err(e) => Err(e.into()),
                    }
                }
            }
        }
        Command::Matchings { file, polygon } => {
            let (_, qp) = load(&file)?;
            let ms = enumerate_perfect_matchings(&qp)?;
            println!("{} perfect matchings", ms.len());
            for m in &ms {
                let names: Vec<&str> = m
                    .arrows
                    .iter()
                    .map(|&a| qp.arrows[a].name.as_str())
                    .collect();
                match m.homology {
                    Some(c) => println!("{{{}}} class ({},{})", names.join(", "), c[0], c[1]),
                    None => println!("{{{}}}", names.join(", ")),
                }
            }
            if polygon {
                let p = matching_polygon(&qp)?;
                for (pt, mult) in &p.points {
                    println!("point ({},{}) x{mult}", pt[0], pt[1]);
                }
                let hull: Vec<String> = p
                    .hull
                    .iter()
                    .map(|v| format!("({},{})", v[0], v[1]))
                    .collect();
                println!("hull {}", hull.join(" "));
            }
            Ok(0)
        }
        Command::Cancel { file, bound } => {
            let (doc, qp) = load(&file)?;
            let g = grading_for(&doc, &qp)?;
            let bound = parse_bound(&bound, &g.face_degree * rat_int(3))?;
            match cancellation_check(&qp, &g, &bound, DEFAULT_PATH_CEILING)? {
                CancelVerdict::HoldsUpToBound => {
                    println!("cancellation: holds up to degree {}", format_rat(&bound));
                    Ok(0)
                }
                CancelVerdict::Counterexample { p, q, arrow, side } => {
                    println!(
                        "cancellation: counterexample ({} vs {} under {} on the {side:?})",
                        p.display(&qp),
                        q.display(&qp),
                        qp.arrows[arrow].name
                    );
                    println!("VERDICT: inconsistent (cancellation fails)");
                    Ok(EXIT_INCONSISTENT)
                }
            }
        }
        Command::Consistency {
            file,
            radius,
            bound,
        } => {
            let (doc, qp) = load(&file)?;
            let g = grading_for(&doc, &qp)?;
            let bound = parse_bound(&bound, &g.face_degree * rat_int(4))?;
            match algebraic_consistency_check(&qp, &g, radius, &bound)? {
                ConsistencyVerdict::ConsistentEvidence => {
                    println!(
                        "algebraic-consistency: consistent-evidence (radius {radius}, bound {})",
                        format_rat(&bound)
                    );
                    Ok(0)
                }
                ConsistencyVerdict::Fails { reason } => {
                    println!("algebraic-consistency: fails ({reason})");
                    println!("VERDICT: inconsistent (algebraic consistency fails)");
                    Ok(EXIT_INCONSISTENT)
                }
            }
        }
        Command::Quotient { file, action } => {
            let (doc, qp) = load(&file)?;
            let act = doc.action(&qp, &action)?;
            let map = quotient(&qp, &act)?;
            let name = doc
                .name
                .map(|n| format!("{n}/{action}"))
                .unwrap_or_else(|| format!("quotient/{action}"));
            print!(
                "{}",
                format::serialize(&format::document(&map.quotient, Some(&name)))
            );
            Ok(0)
        }
        Command::Embed {
            file,
            out,
            radius,
            method,
        } => {
            let (_, qp) = load(&file)?;
            let h = homology(&qp)?;
            let rcharge = match method {
                RMethod::Zigzag => match rcharge_from_zigzag(&qp, &h) {
                    Ok(d) => d.as_rcharge(),
                    Err(Error::ConsistencyViolation { arrow, detail }) => {
                        println!(
                            "VERDICT: inconsistent (zigzag construction fails at arrow \
                             {arrow}: {detail})"
                        );
                        return Ok(EXIT_INCONSISTENT);
                    }
                    Err(e) => return Err(e.into()),
                },
                RMethod::Lp => match find_consistent_rcharge(&qp) {
                    Some(r) => r,
                    None => {
                        println!("VERDICT: inconsistent (no consistent R-charge exists)");
                        return Ok(EXIT_INCONSISTENT);
                    }
                },
            };
            match isoradial_embedding(&qp, &h, &rcharge, radius) {
                Ok(emb) => {
                    std::fs::write(&out, svg(&qp, &emb)).map_err(|e| Failure {
                        code: EXIT_INVALID,
                        message: format!("error: cannot write {}: {e}", out.display()),
                    })?;
                    println!(
                        "embedded {} vertices, {} face circles, max residual {:.2e}",
                        emb.positions.len(),
                        emb.faces.len(),
                        emb.max_residual
                    );
                    Ok(0)
                }
                Err(Error::EmbeddingFailure { residual, element }) => {
                    println!(
                        "VERDICT: inconsistent (isoradial closure fails: residual {residual:e} \
                         at {element})"
                    );
                    Ok(EXIT_INCONSISTENT)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Report {
            file,
            radius,
            bound,
            timings,
        } => {
            let (doc, qp) = load(&file)?;
            let name = doc.name.clone().unwrap_or_else(|| file.display().to_string());
            let opts = ReportOptions {
                radius,
                bound: match &bound {
                    Some(s) => Some(parse_bound(&Some(s.clone()), rat_int(0))?),
                    None => None,
                },
                timings,
            };
            let r: Report = report(&qp, &name, doc.expected.as_ref(), &opts);
            print!("{}", r.text());
            Ok(match r.verdict {
                ReportVerdict::Consistent | ReportVerdict::NotApplicable => 0,
                ReportVerdict::Inconsistent | ReportVerdict::InternalDisagreement => {
                    EXIT_INCONSISTENT
                }
            })
        }
    }
}
