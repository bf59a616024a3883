use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use semifields::counting::{enumerate_classes_in, total_count, ClassOptions, ClassReport};
use semifields::isotopy::{decide_isotopy, enumerate_centralizer, oracle_compare, OracleLimits};
use semifields::semifield::{check_axioms, AXIOM_CAP};
use semifields::{Error, FieldCtx, Pair, TaniguchiParams};

/// Version stamped into every JSON report.
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "semifields",
    version,
    about = "Taniguchi semifields: validation, isotopy and class counts"
)]
struct Cli {
    /// Emit CSV rows instead of JSON (field, oracle-compare, count, census)
    #[arg(long, global = true)]
    csv: bool,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for randomized additivity probes
    #[arg(long, global = true, default_value_t = semifields::semifield::DEFAULT_SEED)]
    seed: u64,
    /// Largest field order the brute-force searches accept
    #[arg(long, global = true, default_value_t = 32)]
    max_order: u32,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    m: u32,
}

#[derive(Args, Clone, Copy)]
struct ParamArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    alpha: u64,
    #[arg(long)]
    a: u64,
    #[arg(long)]
    b: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Field parameters and, optionally, the element encoding table
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        list_elements: bool,
    },
    /// Check the construction conditions and the pre-semifield axioms
    Validate {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Multiply (x, y) by (u, v)
    Multiply {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
        /// Use the original product instead of the default representation
        #[arg(long)]
        original: bool,
    },
    /// Decide isotopy of two parameter tuples
    Decide {
        #[command(flatten)]
        params: ParamArgs,
        /// k of the second tuple (default: same as --k)
        #[arg(long)]
        k2: Option<u32>,
        #[arg(long)]
        alpha2: u64,
        #[arg(long)]
        a2: u64,
        #[arg(long)]
        b2: u64,
    },
    /// Enumerate degree-0 diagonal autotopisms and compare with the formula
    Centralizer {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Compare the closed-form decision with the structured search on all pairs
    OracleCompare {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        /// Restrict to one value of a (default: both 0 and 1)
        #[arg(long)]
        a: Option<u64>,
    },
    /// Count isotopy classes for fixed (p, k, m, a)
    Count {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        a: u64,
        /// Also check representatives against the structured search
        #[arg(long)]
        oracle: bool,
    },
    /// Total class count over k < m/2 and a in {0, 1}
    Census {
        #[command(flatten)]
        field: FieldArgs,
    },
}

struct Outcome {
    report: Value,
    table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
    ok: bool,
}

fn envelope(command: &str, ctx: &FieldCtx, payload: impl Serialize) -> Value {
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("command".into(), json!(command));
    out.insert("field".into(), json!(ctx));
    match serde_json::to_value(payload).expect("reports serialize") {
        Value::Object(body) => out.extend(body),
        other => {
            out.insert("result".into(), other);
        }
    }
    Value::Object(out)
}

fn params(a: &ParamArgs) -> Result<TaniguchiParams, Error> {
    let ctx = Arc::new(FieldCtx::new(a.p, a.m)?);
    TaniguchiParams::from_encodings(ctx, a.k, a.alpha, a.a, a.b)
}

const COUNT_HEADER: [&str; 10] = [
    "p",
    "k",
    "m",
    "a",
    "valid_alpha",
    "valid_b",
    "classes",
    "lower",
    "upper",
    "match",
];

fn count_row(r: &ClassReport) -> Vec<String> {
    vec![
        r.p.to_string(),
        r.k.to_string(),
        r.m.to_string(),
        r.a.to_string(),
        r.valid_alpha_count.to_string(),
        r.valid_b_count.to_string(),
        r.exact_classes.to_string(),
        r.lower_bound.to_string(),
        r.upper_bound.to_string(),
        r.bounds_ok.to_string(),
    ]
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let limits = OracleLimits {
        max_order: cli.max_order,
    };
    match &cli.cmd {
        Cmd::Field {
            field,
            list_elements,
        } => {
            let ctx = FieldCtx::new(field.p, field.m)?;
            let elements: Option<Vec<Value>> = list_elements.then(|| {
                ctx.elements()
                    .map(|e| json!({ "enc": e, "coeffs": ctx.coeffs(e) }))
                    .collect()
            });
            let rows = ctx
                .elements()
                .map(|e| {
                    let c: Vec<String> = ctx.coeffs(e).iter().map(|c| c.to_string()).collect();
                    vec![e.to_string(), c.join(" ")]
                })
                .collect();
            let report = envelope(
                "field",
                &ctx,
                json!({
                    "order": ctx.order(),
                    "generator": ctx.generator(),
                    "elements": elements,
                }),
            );
            Ok(Outcome {
                report,
                table: Some((vec!["enc", "coeffs"], rows)),
                ok: true,
            })
        }
        Cmd::Validate { params: pa } => {
            let t = params(pa)?;
            let v = t.validate();
            let ps = t.presemifield();
            let axioms = if ps.size() <= AXIOM_CAP {
                Some(check_axioms(&ps, cli.seed)?)
            } else {
                None
            };
            let ok = v.valid && axioms.as_ref().is_none_or(|r| r.s2 && r.s3);
            Ok(Outcome {
                report: envelope(
                    "validate",
                    t.ctx(),
                    json!({ "params": t, "report": v, "axioms": axioms }),
                ),
                table: None,
                ok,
            })
        }
        Cmd::Multiply {
            params: pa,
            x,
            y,
            u,
            v,
            original,
        } => {
            let t = params(pa)?;
            let f = t.ctx();
            let l = Pair(f.element(*x)?, f.element(*y)?);
            let r = Pair(f.element(*u)?, f.element(*v)?);
            let product = if *original {
                t.multiply_original(l, r)
            } else {
                t.multiply(l, r)
            };
            Ok(Outcome {
                report: envelope(
                    "multiply",
                    f,
                    json!({
                        "params": t,
                        "representation": if *original { "original" } else { "default" },
                        "lhs": l,
                        "rhs": r,
                        "product": product,
                    }),
                ),
                table: None,
                ok: true,
            })
        }
        Cmd::Decide {
            params: pa,
            k2,
            alpha2,
            a2,
            b2,
        } => {
            let t1 = params(pa)?;
            let t2 = TaniguchiParams::from_encodings(
                t1.ctx().clone(),
                k2.unwrap_or(pa.k),
                *alpha2,
                *a2,
                *b2,
            )?;
            let d = decide_isotopy(&t1, &t2)?;
            Ok(Outcome {
                report: envelope(
                    "decide",
                    t1.ctx(),
                    json!({ "lhs_input": t1, "rhs_input": t2, "decision": d }),
                ),
                table: None,
                ok: true,
            })
        }
        Cmd::Centralizer { params: pa } => {
            let t = params(pa)?;
            let r = enumerate_centralizer(&t, &limits)?;
            let ok = r.matches;
            Ok(Outcome {
                report: envelope("centralizer", t.ctx(), r),
                table: None,
                ok,
            })
        }
        Cmd::OracleCompare { p, k, m, a } => {
            let ctx = Arc::new(FieldCtx::new(*p, *m)?);
            let values: Vec<u64> = match a {
                Some(a) => vec![*a],
                None => vec![0, 1],
            };
            let mut disagreements = Vec::new();
            for a in values {
                eprintln!("oracle-compare: p={p} k={k} m={m} a={a}");
                disagreements.extend(oracle_compare(&ctx, *k, ctx.element(a)?, &limits)?);
            }
            let rows = disagreements
                .iter()
                .map(|d| {
                    vec![
                        serde_json::to_string(&d.lhs).expect("serializes"),
                        serde_json::to_string(&d.rhs).expect("serializes"),
                        d.criterion.to_string(),
                        d.oracle.to_string(),
                    ]
                })
                .collect();
            let ok = disagreements.is_empty();
            Ok(Outcome {
                report: envelope(
                    "oracle-compare",
                    &ctx,
                    json!({ "disagreements": disagreements }),
                ),
                table: Some((vec!["lhs", "rhs", "criterion", "oracle"], rows)),
                ok,
            })
        }
        Cmd::Count { p, k, m, a, oracle } => {
            let ctx = Arc::new(FieldCtx::new(*p, *m)?);
            let opts = ClassOptions {
                oracle: *oracle,
                limits,
                ..Default::default()
            };
            let r = enumerate_classes_in(&ctx, *k, ctx.element(*a)?, &opts)?;
            let ok = r.bounds_ok && r.oracle_distinct != Some(false);
            let rows = vec![count_row(&r)];
            Ok(Outcome {
                report: envelope("count", &ctx, &r),
                table: Some((COUNT_HEADER.to_vec(), rows)),
                ok,
            })
        }
        Cmd::Census { field } => {
            let ctx = FieldCtx::new(field.p, field.m)?;
            eprintln!("census: p={} m={}", field.p, field.m);
            let c = total_count(field.p, field.m, &ClassOptions::default())?;
            let rows = c.breakdown.iter().map(count_row).collect();
            let ok = c.bounds_ok;
            Ok(Outcome {
                report: envelope("census", &ctx, &c),
                table: Some((COUNT_HEADER.to_vec(), rows)),
                ok,
            })
        }
    }
}

fn emit(cli: &Cli, out: &Outcome) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if cli.csv {
        let (header, rows) = out
            .table
            .as_ref()
            .expect("csv support is checked before running");
        let mut w = csv::Writer::from_writer(&mut lock);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
    } else {
        serde_json::to_writer_pretty(&mut lock, &out.report)?;
        writeln!(lock)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.csv
        && matches!(
            cli.cmd,
            Cmd::Validate { .. }
                | Cmd::Multiply { .. }
                | Cmd::Decide { .. }
                | Cmd::Centralizer { .. }
        )
    {
        eprintln!("error: --csv is supported by field, oracle-compare, count and census only");
        return ExitCode::from(2);
    }
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli, &out) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
