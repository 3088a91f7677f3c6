use arq_core::ar::{almost_split, ar_translate, Direction, Side};
use arq_core::components::{ar_capabilities, component_shape, knit_component, regular_census, ComponentWindow, Seed};
use arq_core::derived::{connecting_window, derived_ar_triangle, derived_capabilities, DerivedObject};
use arq_core::linalg::Field;
use arq_core::notation::parse_rep;
use arq_core::quiver::{Quiver, QuiverSpec, Vertex, Window};
use arq_core::rep::Rep;
use arq_core::strings::{orbit_classify, qr_ql_sets, Line, PathSide};
use arq_core::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "arq", version, about = "Auslander–Reiten theory for representations of infinite quivers")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    R,
    L,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeqSide {
    Ending,
    Starting,
}

impl From<SeqSide> for Side {
    fn from(s: SeqSide) -> Side {
        match s {
            SeqSide::Ending => Side::EndingAt,
            SeqSide::Starting => Side::StartingAt,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a quiver spec and summarise it.
    Validate { quiver: PathBuf },
    /// Dynkin / Euclidean / wild classification.
    Classify { quiver: PathBuf },
    /// Infinite-path profile; with --from/--to, the paths between two vertices.
    Paths {
        quiver: PathBuf,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Connected components of Q⁺.
    Qplus { quiver: PathBuf },
    /// A representation: name, dimension vector, finiteness.
    Rep {
        quiver: PathBuf,
        #[arg(long)]
        rep: String,
    },
    /// Dimension vector on a uniform window.
    Dims {
        quiver: PathBuf,
        #[arg(long)]
        rep: String,
        #[arg(long, default_value_t = 4)]
        depth: u64,
    },
    /// DTr (or TrD with --inverse).
    Translate {
        quiver: PathBuf,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        inverse: bool,
    },
    /// The almost split sequence ending (or starting) at an indecomposable.
    Ass {
        quiver: PathBuf,
        #[arg(long)]
        rep: String,
        #[arg(long, value_enum, default_value_t = SeqSide::Ending)]
        side: SeqSide,
    },
    /// τ-orbit tag of a string representation.
    Orbit {
        quiver: PathBuf,
        #[arg(long)]
        rep: String,
    },
    /// The systems Q_R / Q_L of maximal paths with starts in [lo, hi].
    Sigma {
        quiver: PathBuf,
        #[arg(long, value_enum, ignore_case = true)]
        side: SideArg,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<i64>,
    },
    /// Knit an AR component window (preprojective, a preinjective, or through --rep).
    Component {
        quiver: PathBuf,
        #[arg(long, conflicts_with_all = ["preinjective", "preprojective"])]
        rep: Option<String>,
        #[arg(long)]
        preprojective: bool,
        #[arg(long)]
        preinjective: Option<usize>,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
    /// Number and shapes of regular components.
    Census { quiver: PathBuf },
    /// Whether rep⁺ and its derived category have almost split sequences / triangles.
    Caps { quiver: PathBuf },
    /// The almost split triangle ending (or starting) at rep[shift].
    Derived {
        quiver: PathBuf,
        #[arg(long)]
        rep: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
        #[arg(long, value_enum, default_value_t = SeqSide::Ending)]
        side: SeqSide,
    },
    /// Window of the connecting component of the derived category.
    Connecting {
        quiver: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Re-serialise the quiver (JSON spec, or DOT of a window).
    Export {
        quiver: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: u64,
    },
}

enum Fail {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail::Domain(e)
    }
}

type Out = Result<String, Fail>;

fn load(path: &PathBuf) -> Result<Quiver, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
    let mut q = Quiver::from_json(&text)?;
    if let Ok(f) = std::env::var("ARQ_FIELD") {
        let field =
            Field::parse(&f).ok_or_else(|| Fail::Usage(format!("ARQ_FIELD: expected Q or Fp:<prime>, got {f:?}")))?;
        q = q.with_field(field);
    }
    Ok(q)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serialisable")
}

fn no_dot(format: Format) -> Result<(), Fail> {
    if format == Format::Dot {
        return Err(Fail::Usage("--format dot applies to component, connecting and export".into()));
    }
    Ok(())
}

/// JSON by default; `text` renders the given lines instead.
fn emit(format: Format, v: Value, text: impl FnOnce(&Value) -> String) -> Out {
    no_dot(format)?;
    Ok(match format {
        Format::Text => text(&v),
        _ => pretty(&v),
    })
}

fn window_out(format: Format, w: &ComponentWindow) -> String {
    match format {
        Format::Dot => w.to_dot(),
        Format::Text => {
            let mut s = format!("{} component, shape {} ({})\n", w.kind.name(), w.shape, w.certificate);
            for (id, c) in &w.cells {
                s.push_str(&format!("{id}\t{}\n", c.label()));
            }
            s
        }
        Format::Json => pretty(&w.to_json()),
    }
}

fn line_range(q: &Quiver) -> (i64, i64) {
    let core: Vec<i64> = (0..q.core_len()).filter_map(|c| q.label_of(Vertex::Core(c))).collect();
    let lo = core.iter().min().copied().unwrap_or(0);
    let hi = core.iter().max().copied().unwrap_or(0);
    (lo - 1, hi + 1)
}

fn quiver_dot(q: &Quiver, depth: u64) -> String {
    let w = Window::uniform(q, depth);
    let verts = w.vertices(q);
    let mut s = String::from("digraph quiver {\n");
    for &v in &verts {
        s.push_str(&format!("  \"{}\";\n", q.vertex_name(v)));
    }
    for &v in &verts {
        for a in q.out_arrows(v) {
            let t = q.target(a);
            if w.contains(t) {
                s.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                    q.vertex_name(v),
                    q.vertex_name(t),
                    q.arrow_label(a)
                ));
            }
        }
    }
    s.push_str("}\n");
    s
}

fn run(cli: Cli) -> Out {
    let f = cli.format;
    match cli.cmd {
        Cmd::Validate { quiver } => {
            let q = load(&quiver)?;
            q.require_connected()?;
            let v = json!({
                "valid": true,
                "core_vertices": q.core_len(),
                "core_arrows": q.core_arrows().len(),
                "tails": q.tails().len(),
                "finite": q.is_finite(),
                "field": q.field().to_string(),
            });
            emit(f, v, |_| "valid".into())
        }
        Cmd::Classify { quiver } => {
            let q = load(&quiver)?;
            let c = q.classify()?;
            emit(f, json!({"class": c.to_string()}), |v| v["class"].as_str().unwrap_or_default().to_string())
        }
        Cmd::Paths { quiver, from, to } => {
            let q = load(&quiver)?;
            let mut v = json!({
                "profile": q.infinite_path_profile(),
                "single_path": q.is_single_path(),
            });
            if let (Some(x), Some(y)) = (from, to) {
                let (x, y) = (q.parse_vertex(&x)?, q.parse_vertex(&y)?);
                let paths: Vec<Vec<String>> = q
                    .paths_between(x, y)
                    .iter()
                    .map(|p| p.arrows.iter().map(|&a| q.arrow_label(a)).collect())
                    .collect();
                v["paths"] = json!(paths);
            }
            emit(f, v, |v| pretty(&v["profile"]))
        }
        Cmd::Qplus { quiver } => {
            let q = load(&quiver)?;
            let qp = q.q_plus();
            let comps: Vec<Value> = qp
                .components
                .iter()
                .map(|c| {
                    json!({
                        "vertices": c.vertices.iter().map(|&v| q.vertex_name(v)).collect::<Vec<_>>(),
                        "infinite": !c.rays.is_empty(),
                    })
                })
                .collect();
            emit(f, json!({"components": comps}), |v| {
                v["components"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|c| {
                        let names: Vec<&str> =
                            c["vertices"].as_array().unwrap().iter().filter_map(|x| x.as_str()).collect();
                        format!(
                            "{{{}{}}}",
                            names.join(", "),
                            if c["infinite"].as_bool() == Some(true) { ", …" } else { "" }
                        )
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            })
        }
        Cmd::Rep { quiver, rep } => {
            let q = load(&quiver)?;
            let r = parse_rep(&q, &rep)?;
            emit(f, r.to_json(&q)?, |v| v["name"].as_str().unwrap_or_default().to_string())
        }
        Cmd::Dims { quiver, rep, depth } => {
            let q = load(&quiver)?;
            let r = parse_rep(&q, &rep)?;
            let dv = r.dim_vector(&q, &Window::uniform(&q, depth))?;
            let text = dv.render(&q);
            emit(f, dv.to_json(&q), |_| text)
        }
        Cmd::Translate { quiver, rep, inverse } => {
            let q = load(&quiver)?;
            let r = parse_rep(&q, &rep)?;
            let dir = if inverse { Direction::TrD } else { Direction::DTr };
            let t = ar_translate(&q, &r, dir)?;
            let mut v = t.to_json(&q);
            v["input"] = json!(r.name(&q));
            v["direction"] = json!(if inverse { "TrD" } else { "DTr" });
            emit(f, v, |v| v["value"].as_str().unwrap_or_default().to_string())
        }
        Cmd::Ass { quiver, rep, side } => {
            let q = load(&quiver)?;
            let r = parse_rep(&q, &rep)?;
            let s = almost_split(&q, &r, side.into())?;
            emit(f, s.to_json(&q), |v| {
                let mid: Vec<&str> =
                    v["middle"].as_array().unwrap().iter().filter_map(|m| m["name"].as_str()).collect();
                format!(
                    "0 → {} → {} → {} → 0",
                    v["left"]["name"].as_str().unwrap_or_default(),
                    if mid.is_empty() { "0".to_string() } else { mid.join(" ⊕ ") },
                    v["right"]["name"].as_str().unwrap_or_default()
                )
            })
        }
        Cmd::Orbit { quiver, rep } => {
            let q = load(&quiver)?;
            let Rep::String(s) = parse_rep(&q, &rep)? else {
                return Err(Fail::Domain(Error::InvalidString(format!("{rep} is not a string representation"))));
            };
            let tag = orbit_classify(&q, &s)?;
            emit(f, json!({"rep": Rep::String(s).name(&q), "orbit": tag.name()}), |v| {
                v["orbit"].as_str().unwrap_or_default().to_string()
            })
        }
        Cmd::Sigma { quiver, side, lo, hi } => {
            let q = load(&quiver)?;
            let line = Line::new(&q)?;
            let (dlo, dhi) = line_range(&q);
            let (r, l) = qr_ql_sets(&q, lo.unwrap_or(dlo), hi.unwrap_or(dhi))?;
            let set = match side {
                SideArg::R => r,
                SideArg::L => l,
            };
            debug_assert!(matches!((side, set.side), (SideArg::R, PathSide::R) | (SideArg::L, PathSide::L)));
            let text = set.render(&line);
            emit(f, set.to_json(&line), |_| text)
        }
        Cmd::Component { quiver, rep, preprojective, preinjective, depth } => {
            let q = load(&quiver)?;
            if let Some(rep) = rep {
                let r = parse_rep(&q, &rep)?;
                let res = component_shape(&q, &r, depth)?;
                return Ok(match (f, &res.window) {
                    (Format::Json, _) => pretty(&res.to_json()),
                    (_, Some(w)) => window_out(f, w),
                    (Format::Dot, None) => return Err(Fail::Usage("no window to draw for this component".into())),
                    (_, None) => format!("{} component, shape {} ({})\n", res.kind.name(), res.shape, res.certificate),
                });
            }
            let seed = match (preprojective, preinjective) {
                (_, Some(c)) => Seed::Preinjective(c),
                (true, None) => Seed::Preprojective,
                (false, None) => return Err(Fail::Usage("give --rep, --preprojective or --preinjective <c>".into())),
            };
            Ok(window_out(f, &knit_component(&q, &seed, depth)?))
        }
        Cmd::Census { quiver } => {
            let q = load(&quiver)?;
            let c = regular_census(&q)?;
            emit(f, c.to_json(), |v| {
                let mut s = format!("regular components: {}", v["regular"]);
                for b in v["breakdown"].as_array().unwrap() {
                    s.push_str(&format!("\n  {} × {}", b["count"], b["shape"].as_str().unwrap_or_default()));
                }
                s
            })
        }
        Cmd::Caps { quiver } => {
            let q = load(&quiver)?;
            let mut v = ar_capabilities(&q)?.to_json();
            for (k, x) in derived_capabilities(&q)?.to_json().as_object().unwrap() {
                v[k] = x.clone();
            }
            emit(f, v, |v| {
                v.as_object().unwrap().iter().map(|(k, x)| format!("{k}: {x}")).collect::<Vec<_>>().join("\n")
            })
        }
        Cmd::Derived { quiver, rep, shift, side } => {
            let q = load(&quiver)?;
            let r = parse_rep(&q, &rep)?.realize(&q)?;
            let t = derived_ar_triangle(&q, &DerivedObject::new(r, shift), side.into())?;
            emit(f, t.to_json(&q), |v| {
                let name = |x: &Value| x["name"].as_str().unwrap_or_default().to_string();
                let mid: Vec<String> = v["middle"].as_array().unwrap().iter().map(name).collect();
                let next = v["start"]["shift"].as_i64().unwrap_or(0) + 1;
                let rotated = match next {
                    0 => v["start"]["rep"].as_str().unwrap_or_default().to_string(),
                    k => format!("{}[{k}]", v["start"]["rep"].as_str().unwrap_or_default()),
                };
                format!(
                    "{} → {} → {} → {rotated}",
                    name(&v["start"]),
                    if mid.is_empty() { "0".to_string() } else { mid.join(" ⊕ ") },
                    name(&v["end"]),
                )
            })
        }
        Cmd::Connecting { quiver, depth } => {
            let q = load(&quiver)?;
            Ok(window_out(f, &connecting_window(&q, depth)?))
        }
        Cmd::Export { quiver, depth } => {
            let q = load(&quiver)?;
            Ok(match f {
                Format::Dot => quiver_dot(&q, depth),
                _ => {
                    let spec: QuiverSpec = q.to_spec();
                    pretty(&serde_json::to_value(spec).expect("serialisable"))
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(s) => {
            if s.ends_with('\n') {
                print!("{s}");
            } else {
                println!("{s}");
            }
            ExitCode::SUCCESS
        }
        Err(Fail::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(1)
        }
        Err(Fail::Domain(e)) => {
            eprintln!("error[{}]: {e}", e.name());
            ExitCode::from(2)
        }
    }
}
