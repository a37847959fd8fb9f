use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use drhodge::bigphase::{check_identity, check_identity_perturbed, Identity};
use drhodge::givental::{check_feynman, d_operator_check, Perturb};
use drhodge::relations::{self, certify, Relation, RelationReport};
use drhodge::strata::{integrate, parse_class, TautClass};
use drhodge::{golden, Engine, Error, Rational};

const CACHE_ENV: &str = "DRHODGE_CACHE_DIR";
const CACHE_FILE: &str = "memo.drhc";

#[derive(Parser, Debug)]
#[command(name = "drhodge", version, about = "Exact tautological computations on moduli of stable curves")]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct RunConfig {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Memo cache file; defaults to $DRHODGE_CACHE_DIR/memo.drhc when set.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    #[arg(long, global = true)]
    no_cache: bool,
    /// Seed for cache re-verification sampling and perturbation sites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print lambda_g on M_{g,n} as a combination of decorated strata.
    Lambda {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        markings: usize,
        /// Diff against the embedded reference tables.
        #[arg(long)]
        compare_paper: bool,
    },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Integrate a class given in the text format.
    Integrate { class: String },
    /// Double ramification cycle for a profile.
    Dr {
        #[arg(long)]
        genus: u32,
        /// Comma separated integers summing to zero.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        profile: Vec<i64>,
        /// Degree part of Pixton's formula; defaults to the genus.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// List stable graphs of type (g, n).
    Graphs {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = 0)]
        markings: usize,
    },
}

#[derive(Args, Debug, Clone, Serialize)]
struct VerifyArgs {
    /// thm2, lambda-product, lp-family, lp-prop2, universal, givental,
    /// oracle-consistency or all.
    suite: String,
    #[arg(long)]
    genus: Option<u32>,
    /// Identity name for the universal suite (fp, thm1, liuxu, eq218, cor, trr1, g2example).
    #[arg(long)]
    id: Option<String>,
    /// Second index: l for fp, k for trr1, r for lp-family.
    #[arg(long)]
    degree: Option<u32>,
    /// Override the probe degree used to certify relations.
    #[arg(long)]
    probe_degree: Option<usize>,
    #[arg(long, default_value_t = 4)]
    truncation_u: usize,
    #[arg(long)]
    max_edges: Option<usize>,
    /// Extra insertions for universal and givental checks, comma separated.
    #[arg(long, value_delimiter = ',')]
    extras: Vec<u32>,
    /// Perturb one coefficient by +1; the suite must then fail.
    #[arg(long)]
    perturb: bool,
    #[arg(long)]
    compare_paper: bool,
}

enum Outcome {
    Ok,
    Fail,
    Golden,
}

fn rational_json(q: &Rational) -> Value {
    json!({ "num": q.numer().to_string(), "den": q.denom().to_string() })
}

fn class_json(c: &TautClass) -> Value {
    let terms: Vec<Value> = c
        .iter()
        .map(|(d, q)| json!({ "term": d.to_string(), "coefficient": rational_json(q) }))
        .collect();
    json!({ "genus": c.genus(), "markings": c.num_markings(), "terms": terms })
}

fn cache_path(run: &RunConfig) -> Option<PathBuf> {
    if run.no_cache {
        return None;
    }
    run.cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(|d| PathBuf::from(d).join(CACHE_FILE)))
}

fn emit(run: &RunConfig, mut payload: Value, text: impl FnOnce() -> String) {
    use std::io::Write;
    if payload.get("config").is_none() {
        payload["config"] = json!({ "run": run });
    }
    let body = if run.json {
        format!("{}\n", serde_json::to_string_pretty(&payload).expect("serializable"))
    } else {
        text()
    };
    // a closed pipe downstream is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(body.as_bytes());
}

fn cmd_lambda(engine: &Engine, run: &RunConfig, g: u32, n: usize, compare: bool) -> Result<Outcome> {
    let class = if g == 0 {
        TautClass::fundamental(0, n)
    } else {
        (*engine.lambda_class(g, n)?).clone()
    };
    let mut outcome = Outcome::Ok;
    let mut mismatches = Vec::new();
    let mut compared = false;
    if compare {
        if let Some(expected) = golden::lambda(g, n) {
            compared = true;
            mismatches = golden::compare(&expected, &class);
            if !mismatches.is_empty() {
                outcome = Outcome::Golden;
            }
        }
    }
    let payload = json!({
        "command": "lambda",
        "genus": g,
        "markings": n,
        "class": class_json(&class),
        "compared": compared,
        "mismatches": mismatches,
    });
    emit(run, payload, || {
        let mut s = format!("{class}\n");
        if compare && !compared {
            s.push_str(&format!("no reference table for (g, n) = ({g}, {n})\n"));
        }
        for m in &mismatches {
            s.push_str(&format!("MISMATCH {}: expected {}, computed {}\n", m.term, m.expected, m.computed));
        }
        s
    });
    Ok(outcome)
}

fn relation_for(suite: &str, g: u32, degree: Option<u32>) -> Result<Relation> {
    Ok(match suite {
        "thm2" => relations::build_thm2(g)?,
        "lambda-product" => relations::build_lambda_product(g)?,
        "lp-family" => relations::build_lp_family(g, degree.unwrap_or(1))?,
        "lp-prop2" => relations::build_lp_prop2(g)?,
        _ => bail!("unknown relation suite {suite}"),
    })
}

fn default_genera(suite: &str) -> Vec<u32> {
    match suite {
        "thm2" => vec![1, 2],
        "lambda-product" => vec![2, 3],
        "lp-family" => vec![1, 2],
        "lp-prop2" => vec![1],
        "givental" => vec![2],
        "oracle-consistency" => vec![2, 3],
        _ => vec![2],
    }
}

fn relation_suite(engine: &Engine, run: &RunConfig, v: &VerifyArgs, suite: &str) -> Result<(Vec<Value>, bool, bool)> {
    let genera = v.genus.map(|g| vec![g]).unwrap_or_else(|| default_genera(suite));
    let mut records = Vec::new();
    let mut pass = true;
    let mut golden_ok = true;
    for g in genera {
        let mut rel = relation_for(suite, g, v.degree)?;
        let mut blind = false;
        if v.perturb {
            let sites = relations::control_sites(engine, &rel)?;
            match sites.get((run.seed as usize) % sites.len().max(1)) {
                Some(&site) => rel = rel.perturbed(site),
                None => blind = true,
            }
        }
        let report: RelationReport = match v.probe_degree {
            Some(pd) => relations::verify_zero(engine, &rel.id, &rel.difference(), pd)?,
            None => certify(engine, &rel)?,
        };
        pass &= report.pass;
        let mut rec = serde_json::to_value(&report)?;
        if blind {
            rec["note"] = json!(format!("{}; no coefficient is visible to the probes, left unperturbed", report.note));
        }
        if v.compare_paper && suite == "lambda-product" {
            if let Some(expected) = golden::lambda_product(g) {
                let computed = relations::build_lambda_product(g)?.rhs;
                let mm = golden::compare(&expected, &computed);
                golden_ok &= mm.is_empty();
                rec["golden_mismatches"] = serde_json::to_value(&mm)?;
            }
        }
        records.push(rec);
    }
    Ok((records, pass, golden_ok))
}

fn universal_suite(engine: &Engine, run: &RunConfig, v: &VerifyArgs) -> Result<(Vec<Value>, bool)> {
    let ids: Vec<Identity> = match &v.id {
        Some(name) => vec![Identity::parse(name, v.genus.unwrap_or(2), v.degree)?],
        None => vec![
            Identity::Fp { g: 1, l: 2 },
            Identity::Fp { g: 2, l: 3 },
            Identity::LiuXu { g: 1 },
            Identity::LiuXu { g: 2 },
            Identity::Thm1 { g: 2 },
            Identity::Cor { g: 2 },
            Identity::Eq218 { g: 2 },
            Identity::Trr1 { k: 0 },
            Identity::G2Example,
        ],
    };
    let mut records = Vec::new();
    let mut pass = true;
    for id in ids {
        let r = if v.perturb {
            let sites = id.perturbation_sites();
            let site = sites[(run.seed as usize) % sites.len()];
            let extras = if v.extras.is_empty() { id.control_extras() } else { v.extras.clone() };
            check_identity_perturbed(engine, &id, &extras, site)?
        } else {
            check_identity(engine, &id, &v.extras)?
        };
        pass &= r.pass;
        let mut rec = serde_json::to_value(&r)?;
        if v.perturb && r.pass {
            rec["note"] = json!("both sides vanish term by term on this jet; the perturbation is invisible");
        }
        records.push(rec);
    }
    Ok((records, pass))
}

fn givental_suite(engine: &Engine, run: &RunConfig, v: &VerifyArgs) -> Result<(Vec<Value>, bool)> {
    let g = v.genus.unwrap_or(2);
    let perturb = if v.perturb {
        if run.seed % 2 == 0 {
            Perturb { r_coefficient: true, v00: false }
        } else {
            Perturb { r_coefficient: false, v00: true }
        }
    } else {
        Perturb::default()
    };
    let mut extra_sets = vec![v.extras.clone()];
    if v.extras.is_empty() {
        extra_sets.push(vec![2 * g - 2]);
    }
    let mut records = Vec::new();
    let mut pass = true;
    for ex in extra_sets {
        let checks = check_feynman(engine, g, v.truncation_u, &ex, v.max_edges.unwrap_or(v.truncation_u), perturb)?;
        pass &= checks.iter().all(|c| c.pass);
        records.extend(checks.iter().map(|c| serde_json::to_value(c).expect("serializable")));
    }
    if !v.perturb {
        let d = d_operator_check(engine, 1, 2, 2, 2)?;
        pass &= d.pass;
        records.push(json!({ "d_operator": { "l": d.l, "depth": d.depth, "nonzero": d.nonzero, "pass": d.pass } }));
    }
    Ok((records, pass))
}

fn oracle_suite(engine: &Engine, v: &VerifyArgs) -> Result<(Vec<Value>, bool)> {
    let genera = v.genus.map(|g| vec![g]).unwrap_or_else(|| default_genera("oracle-consistency"));
    let mut records = Vec::new();
    let mut pass = true;
    for g in genera {
        for r in relations::oracle_consistency(engine, g)? {
            pass &= r.pass;
            records.push(serde_json::to_value(&r)?);
        }
    }
    Ok((records, pass))
}

fn cmd_verify(engine: &Engine, run: &RunConfig, v: &VerifyArgs) -> Result<Outcome> {
    let suites: Vec<&str> = match v.suite.as_str() {
        "all" => vec!["thm2", "lambda-product", "lp-family", "lp-prop2", "universal", "givental", "oracle-consistency"],
        s => vec![s],
    };
    let mut all_pass = true;
    let mut golden_ok = true;
    let mut out = Vec::new();
    for s in suites {
        let (records, pass) = match s {
            "thm2" | "lambda-product" | "lp-family" | "lp-prop2" => {
                let (r, p, gk) = relation_suite(engine, run, v, s)?;
                golden_ok &= gk;
                (r, p)
            }
            "universal" => universal_suite(engine, run, v)?,
            "givental" => givental_suite(engine, run, v)?,
            "oracle-consistency" => oracle_suite(engine, v)?,
            other => bail!("unknown suite {other}"),
        };
        all_pass &= pass;
        out.push(json!({ "suite": s, "pass": pass, "records": records }));
    }
    let payload = json!({
        "command": "verify",
        "config": { "run": run, "verify": v },
        "pass": all_pass,
        "golden_match": golden_ok,
        "suites": out,
    });
    emit(run, payload.clone(), || {
        let mut s = String::new();
        for suite in payload["suites"].as_array().expect("array") {
            for r in suite["records"].as_array().expect("array") {
                s.push_str(&format!("{} {}\n", suite["suite"].as_str().unwrap_or(""), summary_line(r)));
            }
        }
        s.push_str(if all_pass { "PASS\n" } else { "FAIL\n" });
        s
    });
    Ok(if !all_pass {
        Outcome::Fail
    } else if !golden_ok {
        Outcome::Golden
    } else {
        Outcome::Ok
    })
}

fn summary_line(r: &Value) -> String {
    let pass = r.get("pass").and_then(Value::as_bool).map(|p| if p { "pass" } else { "FAIL" });
    if let Some(id) = r.get("id").and_then(Value::as_str) {
        let detail = match (r.get("chain").and_then(Value::as_array), r.get("note")) {
            (Some(chain), _) => chain.iter().map(|x| x.as_str().unwrap_or("")).collect::<Vec<_>>().join(" = "),
            (_, Some(n)) => n.as_str().unwrap_or("").to_string(),
            _ => String::new(),
        };
        let mut line = format!("{id}: {} {detail}", pass.unwrap_or("?"));
        if let (Some(_), Some(n)) = (r.get("chain"), r.get("note").and_then(Value::as_str)) {
            line.push_str(&format!(" ({n})"));
        }
        if let Some(probes) = r.get("probes").and_then(Value::as_array) {
            for p in probes.iter().filter(|p| p["residual"] != "0") {
                line.push_str(&format!("\n  residual {} against {}", p["residual"].as_str().unwrap_or(""), p["probe"].as_str().unwrap_or("")));
            }
        }
        if let Some(mm) = r.get("golden_mismatches").and_then(Value::as_array) {
            for m in mm {
                line.push_str(&format!(
                    "\n  reference mismatch {}: expected {}, computed {}",
                    m["term"].as_str().unwrap_or(""),
                    m["expected"].as_str().unwrap_or(""),
                    m["computed"].as_str().unwrap_or("")
                ));
            }
        }
        return line;
    }
    if let Some(d) = r.get("d_operator") {
        return format!("D-operator l={} depth={}: {}", d["l"], d["depth"], if d["pass"] == true { "pass" } else { "FAIL" });
    }
    if let Some(m) = r.get("monomial") {
        return format!(
            "lambda{} on M_{}: {} vs {} ({}) {}",
            m,
            r["genus"],
            r["direct"].as_str().unwrap_or(""),
            r["second"].as_str().unwrap_or(""),
            r["route"].as_str().unwrap_or(""),
            pass.unwrap_or("?")
        );
    }
    let q = |v: &Value| format!("{}/{}", v["num"].as_str().unwrap_or(""), v["den"].as_str().unwrap_or(""));
    format!(
        "g={} extras={} [u^{}] {} expected {} ({}) {}",
        r["genus"],
        r["extras"],
        r["i"],
        q(&r["computed"]),
        q(&r["expected"]),
        r["route"].as_str().unwrap_or(""),
        pass.unwrap_or("?")
    )
}

fn cmd_integrate(engine: &Engine, run: &RunConfig, spec: &str) -> Result<Outcome> {
    let class = parse_class(spec).map_err(|e| anyhow!("{e}"))?;
    let dim = class.dim();
    let off: Vec<u32> = class.codims().into_iter().filter(|&c| c as i64 != dim).collect();
    if !off.is_empty() {
        log::warn!("terms of degree {off:?} do not match dimension {dim} and integrate to 0");
    }
    let value = integrate(engine, &class)?;
    let payload = json!({ "command": "integrate", "class": spec, "value": rational_json(&value) });
    emit(run, payload, || format!("{value}\n"));
    Ok(Outcome::Ok)
}

fn cmd_dr(engine: &Engine, run: &RunConfig, g: u32, profile: &[i64], degree: Option<u32>) -> Result<Outcome> {
    let d = degree.unwrap_or(g);
    let p = engine.p_class(g, profile, d)?;
    let class = if d == g {
        p.scaled(&drhodge::exact::rat(1, 2).pow(g as i32))
    } else {
        (*p).clone()
    };
    let payload = json!({
        "command": "dr",
        "genus": g,
        "profile": profile,
        "degree": d,
        "class": class_json(&class),
    });
    emit(run, payload, || format!("{class}\n"));
    Ok(Outcome::Ok)
}

fn cmd_graphs(engine: &Engine, run: &RunConfig, g: u32, n: usize) -> Result<Outcome> {
    let graphs = engine.stable_graphs(g, n)?;
    let recs: Vec<Value> = graphs
        .iter()
        .map(|gr| json!({ "graph": gr.to_string(), "automorphisms": gr.automorphism_order() }))
        .collect();
    let payload = json!({ "command": "graphs", "genus": g, "markings": n, "count": graphs.len(), "graphs": recs });
    emit(run, payload, || {
        let mut s = String::new();
        for gr in graphs.iter() {
            s.push_str(&format!("{gr}  |Aut| = {}\n", gr.automorphism_order()));
        }
        s.push_str(&format!("{} graphs\n", graphs.len()));
        s
    });
    Ok(Outcome::Ok)
}

fn run(cli: &Cli) -> Result<Outcome> {
    let engine = Engine::new();
    let cache = cache_path(&cli.run);
    if let Some(path) = &cache {
        if path.exists() {
            match engine.load_cache(path, cli.run.seed) {
                Ok(stats) => log::info!("loaded {} cached values, re-verified {}", stats.records, stats.reverified),
                Err(e) => log::warn!("ignoring cache {}: {e}", path.display()),
            }
        }
    }
    let outcome = match &cli.cmd {
        Command::Lambda {
            genus,
            markings,
            compare_paper,
        } => cmd_lambda(&engine, &cli.run, *genus, *markings, *compare_paper)?,
        Command::Verify(v) => cmd_verify(&engine, &cli.run, v)?,
        Command::Integrate { class } => cmd_integrate(&engine, &cli.run, class)?,
        Command::Dr { genus, profile, degree } => cmd_dr(&engine, &cli.run, *genus, profile, *degree)?,
        Command::Graphs { genus, markings } => cmd_graphs(&engine, &cli.run, *genus, *markings)?,
    };
    if let Some(path) = &cache {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).ok();
        }
        engine
            .save_cache(path)
            .with_context(|| format!("writing cache {}", path.display()))?;
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Ok(Outcome::Golden) => ExitCode::from(2),
        Err(e) if matches!(e.downcast_ref::<Error>(), Some(Error::Polynomiality(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
