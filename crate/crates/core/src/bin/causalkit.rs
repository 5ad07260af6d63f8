use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use causalkit::classical::{
    ftdr_success, tdr_breakdown, two_copy_decode_success, FreeBit, Layout, Prob, TdrStrategy,
};
use causalkit::duality::{
    check_duality_with_tol, controlled_shift, fourier, gyni_to_dr, two_qubit_unitary, xor_precheck,
    Direction,
};
use causalkit::dump::{parse_process, write_operator, write_process};
use causalkit::games::{
    bell_state, cyril_gyni_strategy, eval_dr, eval_gyni, pauli_y_baseline_strategy, pauli_y_table,
    BellCode, GameStrategy,
};
use causalkit::processes::{build_cyril, is_ppt_cut, validate_process_with_tol, ProcessMatrix};
use causalkit::reproduce::{
    all_pass, cyril_strategy_on, max_gap, phi_plus_process, random_duality_certificates,
    run_manifest, Status, Value,
};
use causalkit::tensor::{wires, CMatrix, LabeledOperator};
use causalkit::{Error, TOL};

#[derive(Parser)]
#[command(
    name = "causalkit",
    version,
    about = "Process matrices, causal games and their duality"
)]
struct Cli {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ProcessArg {
    /// Process dump file.
    file: Option<PathBuf>,
    /// Built-in process instead of a file.
    #[arg(long, value_enum, conflicts_with = "file")]
    process: Option<NamedProcess>,
}

#[derive(Clone, Copy, ValueEnum)]
enum NamedProcess {
    Cyril,
    PhiPlus,
}

#[derive(Clone, Copy, ValueEnum)]
enum DrbStrategy {
    PauliY,
    CyrilDual,
}

#[derive(Clone, Copy, ValueEnum)]
enum DualityStrategy {
    Cyril,
    PauliY,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassicalTask {
    Tdr,
    Ftdr,
    TwoCopy,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassicalStrategy {
    Ebw,
    Definite,
    None,
}

#[derive(Subcommand)]
enum Cmd {
    /// Positivity and normalization check of a process.
    Validate(ProcessArg),
    /// Partial-transpose test across one party's cut.
    Ppt {
        #[command(flatten)]
        p: ProcessArg,
        #[arg(long, default_value = "B")]
        cut: String,
    },
    /// GYNI value with the Cyril instruments.
    Gyni(ProcessArg),
    /// Bell-state retrieval value of a named strategy.
    Drb {
        #[arg(long, value_enum)]
        strategy: DrbStrategy,
    },
    /// Value-preservation certificates between GYNI and DR.
    Duality {
        #[arg(long)]
        direction: Option<Direction>,
        #[arg(long, value_enum)]
        strategy: Option<DualityStrategy>,
        /// Number of seeded random strategies per direction.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Checks the post-unitary XOR correlations at d = 2 and 3.
        #[arg(long)]
        precheck: bool,
        #[arg(long)]
        emit_certificate: Option<PathBuf>,
    },
    /// Classical tripartite retrieval tasks.
    Classical {
        #[arg(value_enum)]
        task: ClassicalTask,
        #[arg(long, value_enum, default_value = "ebw")]
        strategy: ClassicalStrategy,
        /// Print fractions rather than decimals.
        #[arg(long)]
        exact: bool,
    },
    /// Plain-text dump of a built-in object.
    Dump {
        /// cyril, bell:x1,x2[,d], U-qubit (alias U-theorem1), fourier:d, cshift:d or ebw.
        #[arg(long)]
        object: String,
    },
    /// Recomputes every headline number.
    Manifest,
}

enum Fail {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownToken(_) => Fail::Usage(e.to_string()),
            e => Fail::Runtime(e.to_string()),
        }
    }
}

fn tolerance() -> Result<f64, Fail> {
    match std::env::var("CAUSALKIT_TOL") {
        Ok(s) => s
            .parse::<f64>()
            .ok()
            .filter(|t| *t >= 0.0)
            .ok_or_else(|| Fail::Usage(format!("CAUSALKIT_TOL: `{s}` is not a tolerance"))),
        Err(_) => Ok(TOL),
    }
}

fn load(p: &ProcessArg) -> Result<ProcessMatrix, Fail> {
    match (&p.file, p.process) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Fail::Runtime(format!("{}: {e}", path.display())))?;
            Ok(parse_process(&text)?)
        }
        (None, Some(NamedProcess::Cyril)) => Ok(build_cyril()),
        (None, Some(NamedProcess::PhiPlus)) => Ok(phi_plus_process()?),
        (None, None) => Err(Fail::Usage("give a process file or --process".into())),
    }
}

fn emit<T: Serialize>(json: bool, value: &T, human: impl FnOnce() -> String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serializable")
        );
    } else {
        println!("{}", human());
    }
}

fn strategy_for(task: ClassicalStrategy) -> TdrStrategy {
    match task {
        ClassicalStrategy::Ebw => TdrStrategy::Ebw,
        ClassicalStrategy::Definite => TdrStrategy::DefiniteOrder,
        ClassicalStrategy::None => TdrStrategy::NoCollab,
    }
}

fn show(p: Prob, exact: bool) -> String {
    match Value::exact(p) {
        Value::Exact {
            fraction, decimal, ..
        } if exact => format!("{fraction} ({decimal})"),
        Value::Exact { decimal, .. } => decimal,
        _ => unreachable!(),
    }
}

fn parse_indices(s: &str) -> Result<Vec<usize>, Fail> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Fail::Usage(format!("bad index `{t}`")))
        })
        .collect()
}

fn dump_object(name: &str) -> Result<String, Fail> {
    let matrix = |m: CMatrix, names: &[&str], d: usize| -> Result<String, Fail> {
        Ok(write_operator(&LabeledOperator::new(wires(names, d), m)?))
    };
    let (head, arg) = name.split_once(':').unwrap_or((name, ""));
    match head {
        "cyril" if arg.is_empty() => Ok(write_process(&build_cyril())),
        "U-qubit" | "U-theorem1" if arg.is_empty() => matrix(two_qubit_unitary(), &["A", "Ap"], 2),
        "bell" => match parse_indices(arg)?.as_slice() {
            [x1, x2] => Ok(write_operator(&bell_state(BellCode::new(2, *x1, *x2)?))),
            [x1, x2, d] => Ok(write_operator(&bell_state(BellCode::new(*d, *x1, *x2)?))),
            _ => Err(Fail::Usage(format!("`{name}`: expected bell:x1,x2[,d]"))),
        },
        "fourier" | "cshift" => {
            let d: usize = arg
                .parse()
                .map_err(|_| Fail::Usage(format!("`{name}`: expected {head}:d")))?;
            if head == "fourier" {
                matrix(fourier(d)?, &["Q"], d)
            } else {
                matrix(controlled_shift(d)?, &["C", "T"], d)
            }
        }
        "ebw" if arg.is_empty() => {
            let mut out = String::from("o_A o_B o_C -> i_A i_B i_C\n");
            for n in 0..8u8 {
                let o = [n >> 2 & 1, n >> 1 & 1, n & 1];
                let i = causalkit::classical::e_bw(o);
                out.push_str(&format!(
                    "{} {} {} -> {} {} {}\n",
                    o[0], o[1], o[2], i[0], i[1], i[2]
                ));
            }
            Ok(out)
        }
        _ => Err(Fail::Usage(format!("unknown object `{name}`"))),
    }
}

fn run(cli: Cli) -> Result<bool, Fail> {
    let tol = tolerance()?;
    let json = cli.json;
    match cli.cmd {
        Cmd::Validate(p) => {
            let w = load(&p)?;
            let r = validate_process_with_tol(&w, tol)?;
            emit(json, &r, || {
                let mut s = format!(
                    "psd: {} (min eigenvalue {:e})\n",
                    r.psd_ok, r.min_eigenvalue
                );
                for (name, v) in &r.constraint_residuals {
                    s.push_str(&format!("{name}: {v:e}\n"));
                }
                s.push_str(&format!("valid: {}", r.valid));
                s
            });
            Ok(r.valid)
        }
        Cmd::Ppt { p, cut } => {
            let w = load(&p)?;
            let (ppt, min) = is_ppt_cut(&w, &cut)?;
            emit(
                json,
                &json!({"cut": cut, "ppt": ppt, "min_eigenvalue": min}),
                || format!("cut {cut}: PPT={ppt} (min eigenvalue {min:e})"),
            );
            Ok(true)
        }
        Cmd::Gyni(p) => {
            let w = load(&p)?;
            let v = eval_gyni(&cyril_strategy_on(&w)?)?;
            emit(json, &v, || {
                let mut s = String::new();
                for t in &v.terms {
                    s.push_str(&format!("x={:?}: {}\n", t.inputs, t.probability));
                }
                s.push_str(&format!("value: {}", v.value));
                s
            });
            Ok(true)
        }
        Cmd::Drb { strategy } => {
            let s = match strategy {
                DrbStrategy::PauliY => pauli_y_baseline_strategy(),
                DrbStrategy::CyrilDual => gyni_to_dr(&cyril_gyni_strategy())?,
            };
            let v = eval_dr(&s)?;
            let table = match strategy {
                DrbStrategy::PauliY => Some(pauli_y_table(&s)?),
                DrbStrategy::CyrilDual => None,
            };
            emit(
                json,
                &json!({"value": v.value, "terms": v.terms, "table": table}),
                || {
                    let mut out = String::new();
                    for r in table.iter().flatten() {
                        let ud = |u: bool| if u { "up" } else { "down" };
                        out.push_str(&format!(
                            "x={}{} alice={} bob={} p={} {}\n",
                            r.x[0],
                            r.x[1],
                            ud(r.alice_up),
                            ud(r.bob_up),
                            r.probability,
                            if r.success { "success" } else { "failure" }
                        ));
                    }
                    out.push_str(&format!("value: {}", v.value));
                    out
                },
            );
            Ok(true)
        }
        Cmd::Duality {
            direction,
            strategy,
            random,
            d,
            seed,
            precheck,
            emit_certificate,
        } => {
            let (body, ok) = if precheck {
                let p2 = xor_precheck(2)?;
                let p3 = xor_precheck(3)?;
                let ok = (1.0 - p2).abs() <= tol && (1.0 - p3).abs() <= tol;
                (json!({"d2": p2, "d3": p3, "pass": ok}), ok)
            } else if let Some(n) = random {
                let certs = random_duality_certificates(d, n, seed)?;
                let certs: Vec<_> = certs
                    .into_iter()
                    .filter(|c| direction.is_none_or(|dir| dir == c.certificate.direction))
                    .collect();
                let gap = max_gap(&certs);
                (json!({"certificates": certs, "max_gap": gap}), gap <= tol)
            } else {
                let direction = direction.unwrap_or(Direction::GyniToDr);
                let s: GameStrategy = match (direction, strategy) {
                    (Direction::GyniToDr, None | Some(DualityStrategy::Cyril)) => {
                        cyril_gyni_strategy()
                    }
                    (Direction::DrToGyni, None | Some(DualityStrategy::PauliY)) => {
                        pauli_y_baseline_strategy()
                    }
                    _ => return Err(Fail::Usage("strategy does not fit the direction".into())),
                };
                match check_duality_with_tol(&s, direction, tol) {
                    Ok(c) => (serde_json::to_value(&c).expect("serializable"), true),
                    Err(Error::DualityViolation {
                        source_value,
                        target_value,
                    }) => (
                        json!({"source_value": source_value, "target_value": target_value}),
                        false,
                    ),
                    Err(e) => return Err(e.into()),
                }
            };
            if let Some(path) = emit_certificate {
                let text = serde_json::to_string_pretty(&body).expect("serializable");
                std::fs::write(&path, text)
                    .map_err(|e| Fail::Runtime(format!("{}: {e}", path.display())))?;
            }
            emit(json, &body, || {
                serde_json::to_string_pretty(&body).expect("serializable")
            });
            Ok(ok)
        }
        Cmd::Classical {
            task,
            strategy,
            exact,
        } => {
            let st = strategy_for(strategy);
            match task {
                ClassicalTask::Tdr => {
                    let b = tdr_breakdown(st, Layout::Clockwise, FreeBit::FirstListed)?;
                    emit(json, &Value::exact(b.total), || {
                        format!("T-DR {st}: {}", show(b.total, exact))
                    });
                }
                ClassicalTask::Ftdr => {
                    let v = ftdr_success(st)?;
                    emit(
                        json,
                        &json!({"total": Value::exact(v.total), "flag0": Value::exact(v.flag0), "flag1": Value::exact(v.flag1)}),
                        || {
                            format!(
                                "FT-DR {st}: {} (flag 0: {}, flag 1: {})",
                                show(v.total, exact),
                                show(v.flag0, exact),
                                show(v.flag1, exact)
                            )
                        },
                    );
                }
                ClassicalTask::TwoCopy => {
                    let p = two_copy_decode_success();
                    emit(json, &Value::exact(p), || {
                        format!("two-copy decoding: {}", show(p, exact))
                    });
                }
            }
            Ok(true)
        }
        Cmd::Dump { object } => {
            let text = dump_object(&object)?;
            emit(json, &json!({"object": object, "dump": text}), || {
                text.trim_end().to_string()
            });
            Ok(true)
        }
        Cmd::Manifest => {
            let recs = run_manifest(tol);
            emit(json, &recs, || {
                recs.iter()
                    .map(|r| {
                        let tag = if r.status == Status::Pass {
                            "PASS"
                        } else {
                            "FAIL"
                        };
                        format!(
                            "{tag} {:<22} expected {} computed {}",
                            r.claim_id,
                            r.expected.display(),
                            r.computed.display()
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(all_pass(&recs))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Fail::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Fail::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
