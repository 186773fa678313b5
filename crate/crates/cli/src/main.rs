use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use bireflect::factor::Factorize;
use bireflect::factorize::{
    decide_sp, factor_gl, factor_o, factor_sp, verify_certificate, Certificate, SearchOptions,
};
use bireflect::isopair::{hyperbolic_extension, validate, Epsilon, Isopair};
use bireflect::json::{
    certificate_from_json, certificate_to_json, document_field, epsilon_from_json, isopair_from_json,
    isopair_to_json, matrix_document, matrix_from_json, wall_to_json,
};
use bireflect::linalg::{
    characteristic_polynomial, first_non_palindromic_factor, invariant_factors, jordan_numbers,
    minimal_polynomial, similar_to_inverse,
};
use bireflect::oracle::{census, census_csv, enumerate_group, standard_gram, DEFAULT_CAP};
use bireflect::wall::compute_all;
use bireflect::{Error, FieldDescriptor, Matrix, PrimeField, Rationals};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Validate,
    Invariants,
    Wall,
    Decide,
    Factor,
    Extend,
    Oracle,
    Census,
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum GroupArg {
    Gl,
    O,
    Sp,
}

/// Wall invariants, bireflectionality decisions and certified
/// two-involution factorizations in GL, O and Sp.
#[derive(Parser, Debug)]
#[command(name = "bireflect", version)]
struct Cli {
    #[arg(value_enum)]
    command: Option<Command>,
    #[arg(long = "command", value_enum)]
    command_flag: Option<Command>,
    /// Isopair or matrix JSON document.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples per randomized search.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum)]
    group: Option<GroupArg>,
    /// Dimension for census.
    #[arg(long)]
    n: Option<usize>,
    /// Prime for census.
    #[arg(long)]
    p: Option<u64>,
    /// ε for extend (default −1) and census.
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Option<i64>,
    /// Certificate JSON to re-verify in validate.
    #[arg(long)]
    certificate: Option<PathBuf>,
}

/// Rendered output and exit code.
struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn json(v: Value, code: u8) -> Self {
        let mut text = String::new();
        render(&v, 0, &mut text);
        text.push('\n');
        Outcome { text, code }
    }
}

/// Pretty JSON with arrays of scalars kept on one line.
fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push_str(&serde_json::to_string(v).expect("serializable"));
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                render(x, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(k).expect("serializable"));
                out.push_str(": ");
                render(x, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(v).expect("serializable")),
    }
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&s).with_context(|| format!("malformed JSON in {}", path.display()))
}

fn is_isopair_doc(doc: &Value) -> bool {
    doc.get("gram").is_some() && doc.get("epsilon").is_some()
}

fn opts(cli: &Cli) -> SearchOptions {
    SearchOptions {
        seed: cli.seed,
        budget: cli.budget,
    }
}

fn negative(e: &Error) -> bool {
    matches!(e, Error::NotBireflectional(_) | Error::NotSimilarToInverse(_))
}

fn group_of<F: Factorize>(cli: &Cli, pair: Option<&Isopair<F>>) -> GroupArg {
    cli.group.unwrap_or(match pair.map(Isopair::epsilon) {
        Some(Epsilon::Plus) => GroupArg::O,
        Some(Epsilon::Minus) => GroupArg::Sp,
        None => GroupArg::Gl,
    })
}

fn certificate<F: Factorize>(
    group: GroupArg,
    u: &Matrix<F>,
    pair: Option<&Isopair<F>>,
    o: &SearchOptions,
) -> Result<std::result::Result<Certificate<F>, Error>> {
    let need = |g: &str| pair.ok_or_else(|| anyhow!("group {g} needs an isopair input"));
    Ok(match group {
        GroupArg::Gl => factor_gl(u),
        GroupArg::O => factor_o(need("o")?, o),
        GroupArg::Sp => factor_sp(need("sp")?, o),
    })
}

fn on_field<F: Factorize>(f: &F, cli: &Cli, cmd: Command, doc: &Value) -> Result<Outcome> {
    let pair = if is_isopair_doc(doc) && cmd != Command::Validate {
        Some(isopair_from_json(f, doc)?)
    } else {
        None
    };
    let u = match &pair {
        Some(p) => p.u().clone(),
        None => matrix_document(f, doc)?,
    };
    let o = opts(cli);
    match cmd {
        Command::Validate => {
            let mut out = serde_json::Map::new();
            let mut ok = true;
            if is_isopair_doc(doc) {
                let eps = epsilon_from_json(&doc["epsilon"])?;
                let gram = matrix_from_json(f, &doc["gram"])?;
                let report = validate(eps, &gram, &u);
                ok &= report.is_valid();
                out.insert("valid".into(), json!(report.is_valid()));
                out.insert("failures".into(), json!(report.failures));
            } else {
                let valid = u.is_square() && u.is_invertible();
                ok &= valid;
                out.insert("valid".into(), json!(valid));
            }
            if let Some(path) = &cli.certificate {
                let cdoc = read_json(path)?;
                let cert = certificate_from_json(f, &cdoc)?;
                let verified = verify_certificate(&u, &cert);
                ok &= verified;
                out.insert("certificate_verified".into(), json!(verified));
            }
            Ok(Outcome::json(Value::Object(out), if ok { 0 } else { 1 }))
        }
        Command::Invariants => {
            let jordan: Vec<Value> = jordan_numbers(&u)?
                .iter()
                .map(|((p, r), n)| json!({"poly": p.to_string(), "r": r, "n": n}))
                .collect();
            let v = json!({
                "dim": u.rows(),
                "minimal_polynomial": minimal_polynomial(&u).to_string(),
                "characteristic_polynomial": characteristic_polynomial(&u).to_string(),
                "invariant_factors": invariant_factors(&u).iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "jordan": jordan,
                "similar_to_inverse": similar_to_inverse(&u)?,
            });
            Ok(Outcome::json(v, 0))
        }
        Command::Wall => {
            let pair = pair.ok_or_else(|| anyhow!("wall needs an isopair input"))?;
            Ok(Outcome::json(wall_to_json(f, &compute_all(&pair)?), 0))
        }
        Command::Decide => {
            let group = group_of(cli, pair.as_ref());
            let (yes, obstruction) = match group {
                GroupArg::Sp => {
                    let p = pair.as_ref().ok_or_else(|| anyhow!("group sp needs an isopair input"))?;
                    let rep = decide_sp(p)?;
                    (rep.bireflectional, rep.obstruction.map(|o| o.to_string()))
                }
                GroupArg::O => {
                    let p = pair.as_ref().ok_or_else(|| anyhow!("group o needs an isopair input"))?;
                    if p.epsilon() != Epsilon::Plus {
                        bail!("group o needs a symmetric form");
                    }
                    (true, None)
                }
                GroupArg::Gl => match first_non_palindromic_factor(&u)? {
                    None => (true, None),
                    Some(q) => (false, Some(format!("invariant factor {q} is not a palindromial"))),
                },
            };
            let witness = if yes {
                certificate(group, &u, pair.as_ref(), &o)?
                    .ok()
                    .map(|c| certificate_to_json(&c, verify_certificate(&u, &c)))
            } else {
                None
            };
            let v = json!({
                "group": format!("{group:?}").to_lowercase(),
                "bireflectional": yes,
                "obstruction": obstruction,
                "witness": witness,
            });
            Ok(Outcome::json(v, if yes { 0 } else { 2 }))
        }
        Command::Factor => {
            let group = group_of(cli, pair.as_ref());
            match certificate(group, &u, pair.as_ref(), &o)? {
                Ok(c) => Ok(Outcome::json(certificate_to_json(&c, verify_certificate(&u, &c)), 0)),
                Err(e) if negative(&e) => Ok(Outcome::json(
                    json!({"bireflectional": false, "reason": e.to_string()}),
                    2,
                )),
                Err(e) => Err(e.into()),
            }
        }
        Command::Extend => {
            let eps = Epsilon::from_i64(cli.epsilon.unwrap_or(-1))?;
            Ok(Outcome::json(isopair_to_json(&hyperbolic_extension(&u, eps)?), 0))
        }
        Command::Oracle | Command::Census | Command::Selftest => unreachable!(),
    }
}

fn oracle(cli: &Cli, doc: &Value) -> Result<Outcome> {
    let FieldDescriptor::Prime(p) = document_field(doc)? else {
        bail!("the oracle needs a prime field");
    };
    let f = PrimeField::new(p)?;
    let pair = isopair_from_json(&f, doc)?;
    let group = enumerate_group(pair.gram(), pair.epsilon(), cli.seed, DEFAULT_CAP)?;
    if !group.contains(pair.u()) {
        bail!("u is not in the enumerated isometry group");
    }
    let w = group.witness(pair.u())?;
    let v = json!({
        "group_order": group.order(),
        "bireflectional": w.is_some(),
        "witness": w.as_ref().map(|c| certificate_to_json(c, verify_certificate(pair.u(), c))),
    });
    Ok(Outcome::json(v, if w.is_some() { 0 } else { 2 }))
}

fn run_census(cli: &Cli) -> Result<Outcome> {
    let p = cli.p.ok_or_else(|| anyhow!("census needs --p"))?;
    let n = cli.n.ok_or_else(|| anyhow!("census needs --n"))?;
    let eps = match (cli.group, cli.epsilon) {
        (Some(GroupArg::Sp), _) | (None, Some(-1)) => Epsilon::Minus,
        (Some(GroupArg::O), _) | (None, Some(1)) => Epsilon::Plus,
        _ => bail!("census needs --group sp or --group o"),
    };
    let f = PrimeField::new(p)?;
    let group = enumerate_group(&standard_gram(&f, eps, n)?, eps, cli.seed, DEFAULT_CAP)?;
    let rows = census(&group, &opts(cli))?;
    let code = if rows.iter().all(|r| r.agrees()) { 0 } else { 1 };
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => Ok(Outcome {
            text: census_csv(&rows),
            code,
        }),
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "element_id": r.id,
                        "trace": r.trace,
                        "minimal_polynomial": r.minimal_polynomial,
                        "decide": r.decide,
                        "oracle": r.oracle,
                    })
                })
                .collect();
            Ok(Outcome::json(Value::Array(v), code))
        }
    }
}

fn selftest() -> Result<Outcome> {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut check = |name: &str, pass: bool| {
        ok &= pass;
        lines.push(format!("{} {name}", if pass { "ok  " } else { "FAIL" }));
    };
    let f5 = PrimeField::new(5)?;
    let j = Matrix::from_i64(&f5, &[&[0, 1], &[-1, 0]]);
    let d = Isopair::new(Epsilon::Minus, j.clone(), Matrix::from_i64(&f5, &[&[2, 0], &[0, 3]]))?;
    check("diag(2,3) over F5 is not bireflectional", !decide_sp(&d)?.bireflectional);
    let minus = Isopair::new(Epsilon::Minus, j, Matrix::identity(&f5, 2).neg())?;
    let c = factor_sp(&minus, &SearchOptions::default())?;
    check("-I over F5 factors in Sp", verify_certificate(minus.u(), &c));
    let f3 = PrimeField::new(3)?;
    let g = enumerate_group(&standard_gram(&f3, Epsilon::Minus, 2)?, Epsilon::Minus, 0, DEFAULT_CAP)?;
    let rows = census(&g, &SearchOptions::default())?;
    check(
        "Sp2(F3) census: 24 elements, 2 bireflectional, oracle agrees",
        rows.len() == 24 && rows.iter().filter(|r| r.oracle).count() == 2 && rows.iter().all(|r| r.agrees()),
    );
    let q = Rationals;
    let u = Matrix::from_i64(&q, &[&[0, -1], &[1, 0]]);
    let c = factor_gl(&u)?;
    check("rotation over Q factors in GL", verify_certificate(&u, &c));
    let o = Isopair::new(Epsilon::Plus, Matrix::identity(&f3, 2), Matrix::from_i64(&f3, &[&[0, -1], &[1, 0]]))?;
    let c = factor_o(&o, &SearchOptions::default())?;
    check("rotation over F3 factors in O", verify_certificate(o.u(), &c));
    let mut text = lines.join("\n");
    text.push('\n');
    Ok(Outcome {
        text,
        code: if ok { 0 } else { 1 },
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cmd = match (cli.command, cli.command_flag) {
        (Some(a), Some(b)) if a != b => bail!("conflicting commands {a:?} and {b:?}"),
        (Some(c), _) | (None, Some(c)) => c,
        (None, None) => bail!("no command given"),
    };
    match cmd {
        Command::Census => return run_census(cli),
        Command::Selftest => return selftest(),
        _ => {}
    }
    let path = cli.input.as_ref().ok_or_else(|| anyhow!("{cmd:?} needs --input"))?;
    let doc = read_json(path)?;
    if cmd == Command::Oracle {
        return oracle(cli, &doc);
    }
    match document_field(&doc)? {
        FieldDescriptor::Prime(p) => on_field(&PrimeField::new(p)?, cli, cmd, &doc),
        FieldDescriptor::Rational => on_field(&Rationals, cli, cmd, &doc),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &out.text).with_context(|| format!("writing {}", path.display())),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::from(out.code),
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
