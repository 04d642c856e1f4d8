use std::collections::BTreeMap;

use designforge::screen::arith::PrimePower;
use designforge::screen::{case_screen, default_screen, FamilyKey, Gate, PointCount, ScreenReport};
use designforge::Error;
use serde::Serialize;

use crate::output::{parse_range, Run};
use crate::{ScreenArgs, Status};

/// Reports printed one per line up to this many; above it only a summary.
const TABLE_LIMIT: usize = 200;

#[derive(Serialize)]
struct Survivor {
    n: u32,
    q: u64,
    v: u64,
    k: u64,
    case: String,
}

#[derive(Serialize)]
struct FamilyCount {
    cases: usize,
    eliminated: usize,
    survived: usize,
}

#[derive(Serialize)]
struct Summary {
    families: Vec<String>,
    defaults: bool,
    cases: usize,
    eliminated: usize,
    unresolved: Vec<String>,
    by_family: BTreeMap<String, FamilyCount>,
    survivors: Vec<Survivor>,
}

pub fn parse_families(s: &str) -> anyhow::Result<Vec<FamilyKey>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(FamilyKey::ALL.to_vec());
    }
    let mut keys = s
        .split(',')
        .map(|x| FamilyKey::parse(x.trim()))
        .collect::<designforge::Result<Vec<_>>>()?;
    keys.sort_unstable();
    keys.dedup();
    Ok(keys)
}

fn gate(g: Gate) -> &'static str {
    match g {
        Gate::Pass => "pass",
        Gate::Fail => "FAIL",
        Gate::NotApplicable => "-",
    }
}

fn v_text(r: &ScreenReport) -> String {
    match &r.v {
        PointCount::Exact(v) => v.to_string(),
        PointCount::Fraction { num, den } => format!("{num}/{den}"),
        PointCount::LowerBound(v) => format!(">= {v}"),
    }
}

fn print_row(r: &ScreenReport) {
    let verdict = match r.candidate_k {
        Some(k) => format!("survives, k = {k}"),
        None if r.eliminated() => "eliminated".into(),
        None => "unresolved".into(),
    };
    println!(
        "{:<34} v = {:<24} {:<28} square {:<4} divisibility {:<4} bound {:<4} {verdict}",
        r.label,
        v_text(r),
        r.v_factorization.as_deref().unwrap_or(""),
        gate(r.square_ok),
        gate(r.divisibility_ok),
        gate(r.bound_ok),
    );
}

pub fn summarize(keys: &[FamilyKey], defaults: bool, reports: &[ScreenReport]) -> anyhow::Result<serde_json::Value> {
    let mut by_family: BTreeMap<String, FamilyCount> = BTreeMap::new();
    for r in reports {
        let e = by_family.entry(r.case.family.key().to_string()).or_insert(FamilyCount {
            cases: 0,
            eliminated: 0,
            survived: 0,
        });
        e.cases += 1;
        e.eliminated += r.eliminated() as usize;
        e.survived += r.survives() as usize;
    }
    let survivors = reports
        .iter()
        .filter_map(|r| {
            let k = r.candidate_k?;
            Some(Survivor {
                n: r.case.n,
                q: r.case.q.q,
                v: k * k,
                k,
                case: r.label.clone(),
            })
        })
        .collect();
    let summary = Summary {
        families: keys.iter().map(ToString::to_string).collect(),
        defaults,
        cases: reports.len(),
        eliminated: reports.iter().filter(|r| r.eliminated()).count(),
        unresolved: reports
            .iter()
            .filter(|r| !r.eliminated() && !r.survives())
            .map(|r| r.label.clone())
            .collect(),
        by_family,
        survivors,
    };
    Ok(serde_json::to_value(summary)?)
}

pub fn run(args: &ScreenArgs) -> anyhow::Result<Status> {
    let mut run = Run::new("screen", args.out.as_deref())?;
    let keys = parse_families(&args.family)?;
    run.param("family", &args.family);
    let reports = if args.defaults {
        run.param("defaults", true);
        default_screen(&keys)?
    } else {
        let (Some(n), Some(q)) = (&args.n, &args.q) else {
            return Err(Error::Precondition("give --defaults, or both --n and --q".into()).into());
        };
        run.param("n", n);
        run.param("q", q);
        let ns: Vec<u32> = parse_range(n)?
            .into_iter()
            .map(|x| u32::try_from(x).map_err(|_| Error::Precondition(format!("n = {x} too large"))))
            .collect::<Result<_, _>>()?;
        let mut qs = parse_range(q)?;
        if q.contains("..") {
            qs.retain(|&x| PrimePower::new(x).is_ok());
        }
        case_screen(&keys, &ns, &qs)?
    };

    if reports.len() <= TABLE_LIMIT {
        for r in &reports {
            print_row(r);
        }
    }
    let summary = summarize(&keys, args.defaults, &reports)?;
    println!(
        "{} cases, {} eliminated, {} unresolved",
        summary["cases"], summary["eliminated"], summary["unresolved"].as_array().map_or(0, Vec::len)
    );
    for s in summary["survivors"].as_array().into_iter().flatten() {
        println!(
            "survivor: (n, q, v, k) = ({}, {}, {}, {})  [{}]",
            s["n"], s["q"], s["v"], s["k"], s["case"].as_str().unwrap_or("")
        );
    }
    eprintln!("screen finished in {:.2} s", run.elapsed_secs());

    run.write("reports.json", (serde_json::to_string(&reports)? + "\n").as_bytes())?;
    run.write_json("summary.json", &summary)?;
    run.finish()?;
    Ok(Status::Ok)
}
