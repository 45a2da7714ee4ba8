//! `gspin`: command-line front end.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use gspin::chevalley::build_table;
use gspin::satake::{self, GSpinParameter, ParameterFamily};
use gspin::steinberg;
use gspin::{datum_isomorphic, suite, Family, RootDatum, ScalarExpr};

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        CliError::Usage(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(name = "gspin", version, about = "Root data, structure constants and unramified transfer for general spin groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DatumArgs {
    /// gspin_odd, gspin_even, wgspin_even, gsp, gso or gl
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print a root datum.
    Datum(DatumArgs),
    /// Cartan matrix and Dynkin type.
    Classify(DatumArgs),
    /// Dual root datum, with the built-in family it matches.
    Dual(DatumArgs),
    /// Center: identity component and component group.
    Center(DatumArgs),
    /// Levi subgroup obtained by removing simple roots.
    Levi {
        #[command(flatten)]
        datum: DatumArgs,
        /// Comma-separated 1-based indices of removed simple roots.
        #[arg(long, conflicts_with = "k")]
        remove: Option<String>,
        /// Maximal Levi GL_k × (tail).
        #[arg(long)]
        k: Option<usize>,
        /// With --k equal to the rank in an even family, take the other Levi.
        #[arg(long, requires = "k")]
        alternate: bool,
    },
    /// Structure constants N and d.
    Constants(DatumArgs),
    /// Run the full verification table.
    Verify {
        #[arg(long, default_value_t = 5)]
        max_rank: usize,
        #[arg(long)]
        json: bool,
    },
    /// Satake transfer of an unramified GSpin parameter to GL.
    Transfer {
        /// odd or even
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// Comma-separated `symbols@exponent` entries, χ0 first, e.g. "μ^2@0, μ@5/2".
        #[arg(long)]
        chars: String,
        #[arg(long)]
        json: bool,
    },
    /// Exterior square check on diag(a1, a2, a3, a4).
    Extsq {
        /// Four comma-separated scalar expressions; symbolic a1..a4 by default.
        #[arg(long)]
        values: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Bruhat normal form of a group word.
    Normalize {
        #[command(flatten)]
        datum: DatumArgs,
        /// e.g. "u[a1](1) * u[a1+a2](x) * w[2]"
        #[arg(long)]
        word: String,
    },
}

fn build(a: &DatumArgs) -> Result<RootDatum> {
    let f = Family::parse(&a.family).map_err(CliError::usage)?;
    RootDatum::build(f, a.n).map_err(CliError::usage)
}

// Write errors (a closed pipe) are ignored.
fn emit(json: bool, value: Value, text: String) {
    let mut out = std::io::stdout().lock();
    let _ = if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json"))
    } else if text.ends_with('\n') {
        write!(out, "{text}")
    } else {
        writeln!(out, "{text}")
    };
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn cmd_classify(a: &DatumArgs) -> Result<()> {
    let d = build(a)?;
    let c = d.classify();
    let mut text = format!("type: {}\n", c.label);
    for row in &c.cartan {
        text += &row.iter().map(|x| format!("{x:>3}")).collect::<String>();
        text.push('\n');
    }
    let comps: Vec<Value> = c.components.iter().map(|(t, ix)| json!({"type": t, "simple": ix.iter().map(|i| i + 1).collect::<Vec<_>>()})).collect();
    emit(a.json, json!({"type": c.label, "cartan": c.cartan, "components": comps}), text);
    Ok(())
}

fn cmd_dual(a: &DatumArgs) -> Result<()> {
    let d = build(a)?;
    let dual = d.dual();
    let candidates = [Family::GspinOdd, Family::GspinEven, Family::WgspinEven, Family::Gsp, Family::Gso, Family::Gl];
    let matches: Vec<String> = candidates
        .iter()
        .filter_map(|f| RootDatum::build(f.clone(), a.n).ok())
        .filter(|c| datum_isomorphic(&dual, c).is_some())
        .map(|c| format!("{} {}", c.family, c.n))
        .collect();
    let text = format!("{dual}isomorphic to: {}\n", if matches.is_empty() { "none of the built-in families".into() } else { matches.join(", ") });
    emit(a.json, json!({"dual": to_value(&dual), "isomorphic_to": matches}), text);
    Ok(())
}

fn cmd_center(a: &DatumArgs) -> Result<()> {
    let d = build(a)?;
    let c = d.center();
    let mut text = String::from("identity component: cocharacters\n");
    for v in &c.identity_component {
        text += &format!("  {}\n", d.render_cocharacter(v));
    }
    if c.extra_components.is_empty() {
        text += "connected\n";
    } else {
        text += "other components: c(-1) for c in\n";
        for v in &c.extra_components {
            text += &format!("  {}\n", d.render_cocharacter(v));
        }
    }
    emit(a.json, json!({"identity_component": c.identity_component, "extra_components": c.extra_components}), text);
    Ok(())
}

fn cmd_levi(a: &DatumArgs, remove: Option<&str>, k: Option<usize>, alternate: bool) -> Result<()> {
    let d = build(a)?;
    let lf = match (remove, k) {
        (Some(list), None) => {
            let mut idx = Vec::new();
            for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let i: usize = part.parse().map_err(|_| CliError::Usage(format!("bad index `{part}`")))?;
                if i == 0 {
                    return Err(CliError::Usage("indices are 1-based".into()));
                }
                idx.push(i - 1);
            }
            d.levi_factorization(&idx).map_err(CliError::usage)?
        }
        (None, Some(k)) => d.maximal_levi(k, alternate).map_err(CliError::usage)?,
        _ => return Err(CliError::Usage("give exactly one of --remove or --k".into())),
    };
    let rs = d.roots();
    let radical: Vec<String> = lf.nilradical.iter().map(|&r| RootDatum::render_coords(&rs.root(r).coords)).collect();
    let text = format!("Levi: {}\n{}unipotent radical ({} roots): {}\n", lf.label(), lf.levi, radical.len(), radical.join(", "));
    emit(
        a.json,
        json!({"label": lf.label(), "factors": lf.factors, "removed": lf.removed.iter().map(|i| i + 1).collect::<Vec<_>>(), "levi": to_value(&lf.levi), "nilradical": radical}),
        text,
    );
    Ok(())
}

fn cmd_constants(a: &DatumArgs) -> Result<()> {
    let d = build(a)?;
    let t = build_table(&d).map_err(|e| CliError::Failed(e.to_string()))?;
    let rs = t.roots();
    let name = |i: usize| RootDatum::render_coords(&rs.root(i).coords);
    let mut n_rows = Vec::new();
    let mut d_rows = Vec::new();
    for x in 0..rs.len() {
        for y in 0..rs.len() {
            if t.sum(x, y).is_some() {
                n_rows.push((name(x), name(y), t.n(x, y)));
            }
            if y != x && y != rs.negate(x) {
                d_rows.push((name(x), name(y), t.d(x, y)));
            }
        }
    }
    let width = rs.all().iter().map(|r| RootDatum::render_coords(&r.coords).chars().count()).max().unwrap_or(1);
    let mut text = String::from("N_{α,β}\n");
    for (x, y, v) in &n_rows {
        text += &format!("  {x:<width$}  {y:<width$}  {v:>3}\n");
    }
    text += "d_{α,β}\n";
    for (x, y, v) in &d_rows {
        text += &format!("  {x:<width$}  {y:<width$}  {v:>3}\n");
    }
    let nj: Vec<Value> = n_rows.iter().map(|(x, y, v)| json!([x, y, v])).collect();
    let dj: Vec<Value> = d_rows.iter().map(|(x, y, v)| json!([x, y, v])).collect();
    emit(a.json, json!({"N": nj, "d": dj}), text);
    Ok(())
}

fn cmd_verify(max_rank: usize, json: bool) -> Result<()> {
    if max_rank < 2 {
        return Err(CliError::Usage("--max-rank must be at least 2".into()));
    }
    let rows = suite::run(max_rank);
    let text: String = rows.iter().map(|r| r.render() + "\n").collect();
    let value = json!(rows.iter().map(|r| json!({"id": r.id, "name": r.name, "pass": r.pass, "detail": r.detail})).collect::<Vec<_>>());
    emit(json, value, text);
    let failed: Vec<String> = rows.iter().filter(|r| !r.pass).map(|r| format!("[{}] {}", r.id, r.name)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("failed checks: {}", failed.join("; "))))
    }
}

fn cmd_transfer(family: &str, n: usize, chars: &str, json: bool) -> Result<()> {
    let fam = match family {
        "odd" => ParameterFamily::Odd,
        "even" => ParameterFamily::Even,
        other => return Err(CliError::Usage(format!("family must be odd or even, got `{other}`"))),
    };
    let p = GSpinParameter::parse(fam, n, chars).map_err(CliError::usage)?;
    let d = RootDatum::build(fam.datum_family(), n).map_err(CliError::usage)?;
    let t = satake::transfer(&p);
    let (generic, witnesses) = satake::is_generic_unramified(&d, &p).map_err(|e| CliError::Failed(e.to_string()))?;
    let self_dual = satake::twist_dual_check(&t.gl, &p.chars[0]);
    let induced_generic = satake::gl_full_induced_generic(&t.gl);
    let gl_list: Vec<String> = t.gl.entries.iter().map(|c| c.to_string()).collect();
    let mut text = format!("GL({}) parameter: {}\n", t.gl.entries.len(), gl_list.join(", "));
    text += &format!("central character: {}\n", t.central);
    text += &format!("self-dual up to twist by χ0: {self_dual}\n");
    text += &format!("generic: {generic}\n");
    for w in &witnesses {
        text += &format!("  witness coroot {}\n", w.rendered);
    }
    text += &format!("full induced representation of GL irreducible: {induced_generic}\n");
    let mut value = to_value(&p);
    let obj = value.as_object_mut().expect("object");
    obj.insert("gl".into(), to_value(&t.gl.entries));
    obj.insert("central".into(), to_value(&t.central));
    obj.insert("twisted_self_dual".into(), json!(self_dual));
    obj.insert("generic".into(), json!(generic));
    obj.insert("gl_induced_generic".into(), json!(induced_generic));
    obj.insert("witnesses".into(), json!(witnesses.iter().map(|w| json!({"coroot": w.coroot, "rendered": w.rendered})).collect::<Vec<_>>()));
    emit(json, value, text);
    Ok(())
}

fn cmd_extsq(values: Option<&str>, json: bool) -> Result<()> {
    let a: Vec<ScalarExpr> = match values {
        None => (1..=4).map(|i| ScalarExpr::var(&format!("a{i}"))).collect(),
        Some(s) => s.split(',').map(|p| ScalarExpr::parse(p.trim()).map_err(CliError::usage)).collect::<Result<_>>()?,
    };
    let a: [ScalarExpr; 4] = a.try_into().map_err(|_| CliError::Usage("--values needs exactly four entries".into()))?;
    let r = satake::exterior_square_check(&a).map_err(|e| CliError::Failed(e.to_string()))?;
    let show = |v: &[ScalarExpr]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut text = format!("via cocharacters:       {}\n", show(&r.lhs).join(", "));
    text += &format!("wedge basis 12,13,23,14,24,34: {}\n", show(&r.rhs).join(", "));
    text += &format!("order 12,13,23,24,14,34:       {}\n", show(&r.rhs_printed).join(", "));
    text += &format!("multiset equal: {}\nentrywise equal: {}\nentrywise equal in second order: {}\n", r.multiset_equal, r.entrywise_equal, r.printed_entrywise_equal);
    emit(
        json,
        json!({"lhs": show(&r.lhs), "rhs": show(&r.rhs), "rhs_alternate_order": show(&r.rhs_printed), "multiset_equal": r.multiset_equal, "entrywise_equal": r.entrywise_equal, "alternate_entrywise_equal": r.printed_entrywise_equal}),
        text,
    );
    if r.multiset_equal && r.entrywise_equal {
        Ok(())
    } else {
        Err(CliError::Failed("exterior square identity fails".into()))
    }
}

fn cmd_normalize(a: &DatumArgs, word: &str) -> Result<()> {
    let d = build(a)?;
    let t = build_table(&d).map_err(|e| CliError::Failed(e.to_string()))?;
    let w = steinberg::parse_word(word, &d).map_err(CliError::usage)?;
    let nf = steinberg::normalize(&w, &t).map_err(|e| CliError::Failed(e.to_string()))?;
    let out = nf.render(&d);
    emit(a.json, json!({"input": w.render(&d), "normal_form": out}), format!("{out}\n"));
    Ok(())
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Datum(a) => {
            let d = build(&a)?;
            emit(a.json, to_value(&d), d.to_string());
            Ok(())
        }
        Command::Classify(a) => cmd_classify(&a),
        Command::Dual(a) => cmd_dual(&a),
        Command::Center(a) => cmd_center(&a),
        Command::Levi { datum, remove, k, alternate } => cmd_levi(&datum, remove.as_deref(), k, alternate),
        Command::Constants(a) => cmd_constants(&a),
        Command::Verify { max_rank, json } => cmd_verify(max_rank, json),
        Command::Transfer { family, n, chars, json } => cmd_transfer(&family, n, &chars, json),
        Command::Extsq { values, json } => cmd_extsq(values.as_deref(), json),
        Command::Normalize { datum, word } => cmd_normalize(&datum, &word),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Failed(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
