use designforge::design::DesignFile;
use designforge::{Design, Error, GeneratorFile};
use serde::Serialize;

use crate::output::Run;
use crate::{group_cap, Status, VerifyArgs};

#[derive(Serialize)]
struct Report {
    v: usize,
    k: usize,
    b: usize,
    t: usize,
    /// Index for every `s ≤ t`, or `null` where `s`-subsets are not
    /// covered uniformly.
    lambdas: Vec<Option<usize>>,
    is_t_design: bool,
    block_transitive: bool,
    flag_transitive: bool,
    block_stabilizer_order: usize,
}

fn parse_block(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            let p: usize = x
                .trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("bad point {x:?} in block")))?;
            if p == 0 {
                return Err(Error::Precondition("points are numbered from 1".into()).into());
            }
            Ok(p - 1)
        })
        .collect()
}

pub fn run(args: &VerifyArgs) -> anyhow::Result<Status> {
    let mut run = Run::new("verify", None)?;
    let g = GeneratorFile::parse(&run.read_input(&args.gens)?)?.generate(group_cap()?)?;
    let d = match (&args.design, &args.block) {
        (Some(path), _) => DesignFile::from_json(&run.read_input(path)?)?.to_design()?,
        (None, Some(block)) => Design::from_base_block(&g, &parse_block(block)?)?,
        (None, None) => unreachable!("clap requires one of --design, --block"),
    };
    if args.t == 0 || args.t > d.k() {
        return Err(Error::Precondition(format!("t = {} outside 1..={}", args.t, d.k())).into());
    }
    let lambdas = (0..=args.t).map(|s| d.lambda_of(s)).collect::<designforge::Result<Vec<_>>>()?;
    let block_transitive = d.is_block_transitive(&g)?;
    let report = Report {
        v: d.v(),
        k: d.k(),
        b: d.b(),
        t: args.t,
        is_t_design: lambdas[args.t].is_some(),
        block_transitive,
        flag_transitive: block_transitive && d.is_flag_transitive(&g)?,
        block_stabilizer_order: g.set_stabilizer(&d.blocks()[0]).order(),
        lambdas,
    };
    match report.lambdas[args.t] {
        Some(l) => println!("certified {}-({},{},{}) design, b = {}", args.t, d.v(), d.k(), l, d.b()),
        None => println!("not a {}-design: {} blocks of size {} on {} points", args.t, d.b(), d.k(), d.v()),
    }
    let shown: Vec<String> = report
        .lambdas
        .iter()
        .map(|l| l.map_or("-".into(), |x| x.to_string()))
        .collect();
    println!("λ_s for s = 0..{}: {}", args.t, shown.join(", "));
    println!(
        "block-transitive: {}, flag-transitive: {}, |G_B| = {}",
        yes(report.block_transitive),
        yes(report.flag_transitive),
        report.block_stabilizer_order
    );
    if let Some(path) = &args.out {
        let mut text = serde_json::to_string_pretty(&report)?;
        text.push('\n');
        std::fs::write(path, text)?;
    }
    Ok(if report.is_t_design { Status::Ok } else { Status::Negative })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
