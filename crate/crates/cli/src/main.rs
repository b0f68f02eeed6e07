//! btk: exact computations on the Bruhat-Tits tree of PGL2 over a local
//! field. Decompositions, tree queries, automorphism classification, graph
//! export, and the deterministic verification suites.

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use btk_core::field::{Backend, Field};
use btk_core::geometry::{
    classify, end_pair_witness, ghat_local_test, sphere_witness, weak2_witness, AutClass,
    BallCenter, GhatVerdict, LocalAut,
};
use btk_core::gl2::{
    bruhat, cartan, iwahori_factor, iwasawa, levi, member, BruhatForm, IwahoriSlot, Mat2,
    SubgroupTag,
};
use btk_core::tree::{act, ball, ball_dot, base_vertex, distance, geodesic, neighbors, Vertex};
use btk_core::verify::{run_suite, Suite, SuiteParams};

#[derive(Parser)]
#[command(
    name = "btk",
    about = "Bruhat-Tits tree toolkit for PGL2 over a local field",
    version
)]
struct Cli {
    /// Field backend
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Qp)]
    backend: BackendArg,

    /// Residue characteristic (prime); BTK_P can set the default
    #[arg(long, global = true, env = "BTK_P")]
    p: Option<u64>,

    /// Output format (dot applies to `ball` only)
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Qp,
    Laurent,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Text,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum DecompKind {
    Iwasawa,
    Cartan,
    Bruhat,
    Levi,
    Iwahori,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a matrix through one of the classical decompositions
    Decompose {
        #[arg(long, value_enum)]
        kind: DecompKind,
        /// Matrix "a,b;c,d" with scalar entry syntax
        #[arg(long)]
        matrix: String,
        /// Iwahori factor ordering, e.g. "nprime,t,n"
        #[arg(long, default_value = "nprime,t,n")]
        ordering: String,
    },
    /// Tree distance between two vertices "(m;c)"
    Distance {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// The unique geodesic between two vertices
    Geodesic {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// The p+1 neighbors of a vertex
    Neighbors {
        #[arg(long)]
        vertex: String,
    },
    /// Ball around a center vertex; supports DOT export
    Ball {
        #[arg(long, default_value = "(0;0)")]
        center: String,
        #[arg(long)]
        radius: u64,
    },
    /// Apply a matrix to a vertex
    Act {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        vertex: String,
    },
    /// Classify the induced automorphism (elliptic / inversion / hyperbolic)
    Classify {
        #[arg(long)]
        matrix: String,
    },
    /// Constructive transitivity witnesses
    Witness {
        #[command(subcommand)]
        kind: WitnessKind,
    },
    /// Local-agreement test for a finite ball automorphism
    GhatTest {
        /// Agreement level e
        #[arg(long)]
        e: u64,
        /// JSON file with the local automorphism ("-" for stdin)
        #[arg(long, conflicts_with_all = ["matrix", "radius"])]
        input: Option<String>,
        /// Test the restriction of this matrix instead of a file
        #[arg(long, requires = "radius")]
        matrix: Option<String>,
        /// Restriction radius around the base vertex
        #[arg(long)]
        radius: Option<u64>,
    },
    /// Run a deterministic verification suite
    Verify {
        #[arg(long)]
        suite: String,
        /// Seed; mandatory for the randomized suites, there is no hidden entropy
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases: Option<u64>,
        #[arg(long)]
        radius: Option<u64>,
        /// Agreement level for ghat-local
        #[arg(long)]
        e: Option<u64>,
    },
}

#[derive(Subcommand)]
enum WitnessKind {
    /// Map a vertex pair onto a vertex pair at the same distance
    Pair {
        #[arg(long)]
        x1: String,
        #[arg(long)]
        x2: String,
        #[arg(long)]
        y1: String,
        #[arg(long)]
        y2: String,
    },
    /// Fix x and map y to z on the same sphere
    Sphere {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
    },
    /// Map a marked apartment (vertex plus two ends) onto another
    Ends {
        #[arg(long)]
        x: String,
        #[arg(long)]
        omega1: String,
        #[arg(long)]
        omega2: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        sigma1: String,
        #[arg(long)]
        sigma2: String,
    },
}

/// 0 = ok, 1 = verification failure / absent witness, 2 = malformed input.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

macro_rules! usage {
    ($e:expr) => {
        $e.map_err(|err| Failure::usage(err.to_string()))
    };
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("btk: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn field_of(cli: &Cli) -> Result<Field, Failure> {
    let p = cli
        .p
        .ok_or_else(|| Failure::usage("--p is required (or set BTK_P)"))?;
    let backend = match cli.backend {
        BackendArg::Qp => Backend::Qp,
        BackendArg::Laurent => Backend::Laurent,
    };
    usage!(Field::new(backend, p))
}

fn emit(cli: &Cli, value: &Value, text: String) {
    match cli.format {
        FormatArg::Json => println!("{value}"),
        _ => println!("{text}"),
    }
}

fn mat_json(m: &Mat2) -> Value {
    Value::String(m.to_string())
}

fn path_json(vs: &[Vertex]) -> Value {
    Value::Array(vs.iter().map(|v| Value::String(v.to_string())).collect())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Decompose {
            kind,
            matrix,
            ordering,
        } => {
            let f = field_of(&cli)?;
            let g = usage!(f.parse_mat2(matrix))?;
            let (value, verified) = decompose(&f, &g, *kind, ordering)?;
            emit(
                &cli,
                &value,
                serde_json::to_string_pretty(&value).unwrap_or_default(),
            );
            if !verified {
                return Err(Failure::verification("decomposition failed verification"));
            }
            Ok(())
        }
        Command::Distance { x, y } => {
            let f = field_of(&cli)?;
            let x = usage!(f.parse_vertex(x))?;
            let y = usage!(f.parse_vertex(y))?;
            let d = distance(&x, &y);
            emit(
                &cli,
                &json!({"x": x.to_string(), "y": y.to_string(), "distance": d}),
                format!("{d}"),
            );
            Ok(())
        }
        Command::Geodesic { x, y } => {
            let f = field_of(&cli)?;
            let x = usage!(f.parse_vertex(x))?;
            let y = usage!(f.parse_vertex(y))?;
            let path = geodesic(&x, &y);
            emit(
                &cli,
                &json!({"x": x.to_string(), "y": y.to_string(), "path": path_json(path.vertices())}),
                path.to_string(),
            );
            Ok(())
        }
        Command::Neighbors { vertex } => {
            let f = field_of(&cli)?;
            let v = usage!(f.parse_vertex(vertex))?;
            let ns = neighbors(&v);
            emit(
                &cli,
                &json!({"vertex": v.to_string(), "neighbors": path_json(&ns)}),
                ns.iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join("\n"),
            );
            Ok(())
        }
        Command::Ball { center, radius } => {
            let f = field_of(&cli)?;
            let c = usage!(f.parse_vertex(center))?;
            if cli.format == FormatArg::Dot {
                print!("{}", ball_dot(&c, *radius));
                return Ok(());
            }
            let verts = ball(&c, *radius);
            emit(
                &cli,
                &json!({
                    "center": c.to_string(),
                    "radius": radius,
                    "count": verts.len(),
                    "vertices": path_json(&verts),
                }),
                verts
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("\n"),
            );
            Ok(())
        }
        Command::Act { matrix, vertex } => {
            let f = field_of(&cli)?;
            let g = usage!(f.parse_mat2(matrix))?;
            let v = usage!(f.parse_vertex(vertex))?;
            let image = act(&g, &v);
            emit(
                &cli,
                &json!({"matrix": g.to_string(), "vertex": v.to_string(), "image": image.to_string()}),
                image.to_string(),
            );
            Ok(())
        }
        Command::Classify { matrix } => {
            let f = field_of(&cli)?;
            let g = usage!(f.parse_mat2(matrix))?;
            let class = classify(&g).map_err(|e| Failure::verification(e.to_string()))?;
            let value = match &class {
                AutClass::Elliptic { fixed } => {
                    json!({"matrix": g.to_string(), "type": "elliptic", "fixed_vertex": fixed.to_string()})
                }
                AutClass::Inversion { edge } => {
                    let (a, b) = edge.endpoints();
                    json!({"matrix": g.to_string(), "type": "inversion", "edge": [a.to_string(), b.to_string()]})
                }
                AutClass::Hyperbolic {
                    length,
                    axis_window,
                } => json!({
                    "matrix": g.to_string(),
                    "type": "hyperbolic",
                    "length": length,
                    "axis_window": path_json(axis_window.vertices()),
                }),
            };
            emit(&cli, &value, value.to_string());
            Ok(())
        }
        Command::Witness { kind } => {
            let f = field_of(&cli)?;
            let (witness, constraints) = match kind {
                WitnessKind::Pair { x1, x2, y1, y2 } => {
                    let x1 = usage!(f.parse_vertex(x1))?;
                    let x2 = usage!(f.parse_vertex(x2))?;
                    let y1 = usage!(f.parse_vertex(y1))?;
                    let y2 = usage!(f.parse_vertex(y2))?;
                    let g = weak2_witness(&x1, &x2, &y1, &y2)
                        .map_err(|e| Failure::verification(e.to_string()))?;
                    (g, json!({"kind": "pair"}))
                }
                WitnessKind::Sphere { x, y, z } => {
                    let x = usage!(f.parse_vertex(x))?;
                    let y = usage!(f.parse_vertex(y))?;
                    let z = usage!(f.parse_vertex(z))?;
                    let g = sphere_witness(&x, &y, &z)
                        .map_err(|e| Failure::verification(e.to_string()))?;
                    (g, json!({"kind": "sphere"}))
                }
                WitnessKind::Ends {
                    x,
                    omega1,
                    omega2,
                    y,
                    sigma1,
                    sigma2,
                } => {
                    let x = usage!(f.parse_vertex(x))?;
                    let o1 = usage!(f.parse_end(omega1))?;
                    let o2 = usage!(f.parse_end(omega2))?;
                    let y = usage!(f.parse_vertex(y))?;
                    let s1 = usage!(f.parse_end(sigma1))?;
                    let s2 = usage!(f.parse_end(sigma2))?;
                    let g = end_pair_witness(&x, &o1, &o2, &y, &s1, &s2)
                        .map_err(|e| Failure::verification(e.to_string()))?;
                    (g, json!({"kind": "ends"}))
                }
            };
            let mut value = constraints;
            value["witness"] = mat_json(&witness);
            value["verified"] = json!(true);
            emit(&cli, &value, witness.to_string());
            Ok(())
        }
        Command::GhatTest {
            e,
            input,
            matrix,
            radius,
        } => {
            let f = field_of(&cli)?;
            let la = match (input, matrix) {
                (Some(path), None) => {
                    let text = if path == "-" {
                        usage!(std::io::read_to_string(std::io::stdin()))?
                    } else {
                        usage!(std::fs::read_to_string(path))?
                    };
                    usage!(LocalAut::from_json(f, &text))?
                }
                (None, Some(m)) => {
                    let g = usage!(f.parse_mat2(m))?;
                    let r = radius.ok_or_else(|| Failure::usage("--radius required with --matrix"))?;
                    LocalAut::restriction(&g, BallCenter::Vertex(base_vertex(f)), r)
                }
                _ => return Err(Failure::usage("provide exactly one of --input or --matrix")),
            };
            let verdict =
                ghat_local_test(&la, *e).map_err(|err| Failure::usage(err.to_string()))?;
            match verdict {
                GhatVerdict::LocallyPgl2 => {
                    emit(&cli, &json!({"e": e, "verdict": "locally-pgl2"}), "locally-pgl2".into());
                    Ok(())
                }
                GhatVerdict::Violation { edge } => {
                    let (a, b) = edge.endpoints();
                    emit(
                        &cli,
                        &json!({"e": e, "verdict": "violation", "edge": [a.to_string(), b.to_string()]}),
                        format!("violation at {edge}"),
                    );
                    Err(Failure::verification(format!("violation at edge {edge}")))
                }
            }
        }
        Command::Verify {
            suite,
            seed,
            cases,
            radius,
            e,
        } => {
            let f = field_of(&cli)?;
            let suite = Suite::parse(suite)
                .ok_or_else(|| Failure::usage(format!("unknown suite: {suite}")))?;
            let randomized = !matches!(suite, Suite::CartanDistance | Suite::NkIndex);
            let seed = match (seed, randomized) {
                (Some(s), _) => *s,
                (None, false) => 0,
                (None, true) => {
                    return Err(Failure::usage(format!(
                        "suite {} is randomized and requires --seed",
                        suite.name()
                    )))
                }
            };
            let mut params = SuiteParams::new(f, seed);
            if let Some(c) = cases {
                params = params.with_cases(*c);
            }
            if let Some(r) = radius {
                params = params.with_radius(*r);
            } else if suite == Suite::ClassifyOracle {
                params = params.with_radius(8);
            }
            if let Some(level) = e {
                params = params.with_level(*level);
            }
            let started = Instant::now();
            let report = run_suite(suite, &params);
            let wall = started.elapsed();
            // timing goes to stderr so reports stay byte-identical across runs
            let _ = writeln!(
                std::io::stderr(),
                "btk: suite {} finished in {:.3}s ({} cases, {} failures)",
                report.suite,
                wall.as_secs_f64(),
                report.cases,
                report.failures.len()
            );
            let value = serde_json::to_value(&report).expect("report serializes");
            let mut lines = vec![format!(
                "suite {} p={} cases={} failures={}",
                report.suite,
                report.p,
                report.cases,
                report.failures.len()
            )];
            for fail in &report.failures {
                lines.push(format!("  case {}: {} [{}]", fail.case, fail.description, fail.repro));
            }
            emit(&cli, &value, lines.join("\n"));
            if !report.passed() {
                return Err(Failure::verification(format!(
                    "suite {} reported {} failures",
                    report.suite,
                    report.failures.len()
                )));
            }
            Ok(())
        }
    }
}

fn parse_ordering(s: &str) -> Result<[IwahoriSlot; 3], Failure> {
    let slots: Vec<IwahoriSlot> = s
        .split(',')
        .map(|part| match part.trim().to_lowercase().as_str() {
            "nprime" | "n'" => Ok(IwahoriSlot::NPrime),
            "t" => Ok(IwahoriSlot::T),
            "n" => Ok(IwahoriSlot::N),
            other => Err(Failure::usage(format!("bad ordering slot: {other}"))),
        })
        .collect::<Result<_, _>>()?;
    slots
        .try_into()
        .map_err(|_| Failure::usage("ordering must have three slots"))
}

fn factor_entry(role: &str, m: &Mat2, tag: Option<SubgroupTag>) -> Value {
    let mut v = json!({"role": role, "matrix": m.to_string()});
    if let Some(tag) = tag {
        v["member"] = json!(format!("{tag:?}"));
        v["member_ok"] = json!(member(m, tag));
    }
    v
}

fn decompose(
    field: &Field,
    g: &Mat2,
    kind: DecompKind,
    ordering: &str,
) -> Result<(Value, bool), Failure> {
    let mut factors: Vec<Value> = Vec::new();
    let mut extra = serde_json::Map::new();
    let verified;
    match kind {
        DecompKind::Iwasawa => {
            let (b, k) = iwasawa(g);
            verified = b.mul(&k) == *g && member(&b, SubgroupTag::B) && member(&k, SubgroupTag::K);
            factors.push(factor_entry("b", &b, Some(SubgroupTag::B)));
            factors.push(factor_entry("k", &k, Some(SubgroupTag::K)));
        }
        DecompKind::Cartan => {
            let form = cartan(g);
            verified = form.recompose() == *g
                && member(&form.k1, SubgroupTag::K)
                && member(&form.k2, SubgroupTag::K);
            extra.insert(
                "exponents".into(),
                json!([form.exponents.0, form.exponents.1]),
            );
            factors.push(factor_entry("k1", &form.k1, Some(SubgroupTag::K)));
            factors.push(factor_entry(
                "diagonal",
                &form.diagonal_part(*field),
                None,
            ));
            factors.push(factor_entry("k2", &form.k2, Some(SubgroupTag::K)));
        }
        DecompKind::Bruhat => {
            let form = bruhat(g);
            verified = form.recompose() == *g;
            match &form {
                BruhatForm::CaseB(b) => {
                    extra.insert("case".into(), json!("B"));
                    factors.push(factor_entry("b", b, Some(SubgroupTag::B)));
                }
                BruhatForm::CaseBsB { b1, b2 } => {
                    extra.insert("case".into(), json!("BsB"));
                    factors.push(factor_entry("b1", b1, Some(SubgroupTag::B)));
                    factors.push(factor_entry("s", &Mat2::swap(*field), None));
                    factors.push(factor_entry("b2", b2, Some(SubgroupTag::B)));
                }
            }
        }
        DecompKind::Levi => {
            let (n, t) = levi(g).map_err(|e| Failure::usage(e.to_string()))?;
            verified =
                n.mul(&t) == *g && member(&n, SubgroupTag::N) && member(&t, SubgroupTag::T);
            factors.push(factor_entry("n", &n, Some(SubgroupTag::N)));
            factors.push(factor_entry("t", &t, Some(SubgroupTag::T)));
        }
        DecompKind::Iwahori => {
            let slots = parse_ordering(ordering)?;
            let (f1, f2, f3) =
                iwahori_factor(g, slots).map_err(|e| Failure::usage(e.to_string()))?;
            verified = f1.mul(&f2).mul(&f3) == *g
                && [&f1, &f2, &f3].iter().all(|m| member(m, SubgroupTag::I));
            let tag_of = |s: IwahoriSlot| match s {
                IwahoriSlot::NPrime => SubgroupTag::NPrime,
                IwahoriSlot::T => SubgroupTag::T,
                IwahoriSlot::N => SubgroupTag::N,
            };
            factors.push(factor_entry("f1", &f1, Some(tag_of(slots[0]))));
            factors.push(factor_entry("f2", &f2, Some(tag_of(slots[1]))));
            factors.push(factor_entry("f3", &f3, Some(tag_of(slots[2]))));
        }
    }
    let mut value = serde_json::Map::new();
    value.insert("kind".into(), json!(format!("{kind:?}").to_lowercase()));
    value.insert("input".into(), json!(g.to_string()));
    value.insert("factors".into(), Value::Array(factors));
    value.extend(extra);
    value.insert("verified".into(), json!(verified));
    Ok((Value::Object(value), verified))
}
