use std::time::Instant;

use designforge::design::{DesignFile, DesignMeta};
use designforge::equivalence::{design_orbits, transported_overgroup};
use designforge::search::{self, sweep_lambdas, SearchJob, SearchOptions, SearchResult, SearchStats};
use designforge::{Design, GeneratorFile, GroupTable};
use serde::Serialize;

use crate::output::Run;
use crate::{group_cap, SearchArgs, Status};

#[derive(Serialize)]
struct GroupInfo {
    file: String,
    degree: usize,
    order: usize,
}

#[derive(Serialize)]
struct LambdaSummary {
    lambda: usize,
    b: usize,
    stabilizer_order: Option<usize>,
    inadmissible_b: bool,
    stats: SearchStats,
    designs: usize,
    iso_classes: Option<usize>,
    /// Orbits of the overgroup on the found block sets.
    aut_orbits: Option<usize>,
    flag_transitive: usize,
    files: Vec<String>,
    /// Members of each isomorphism class, as indices into `files`.
    classes: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize)]
struct Summary {
    group: GroupInfo,
    overgroup: Option<GroupInfo>,
    k: usize,
    lambdas: Vec<LambdaSummary>,
}

fn file_name(path: &std::path::Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn load_group(run: &mut Run, path: &std::path::Path) -> anyhow::Result<GroupTable> {
    let text = run.read_input(path)?;
    Ok(GeneratorFile::parse(&text)?.generate(group_cap()?)?)
}

pub fn run(args: &SearchArgs) -> anyhow::Result<Status> {
    let mut run = Run::new("search", args.out.as_deref())?;
    run.param("k", args.k);
    run.param("lambda", args.lambda);
    run.param("all", args.all);
    run.param("include_lambda_one", args.include_lambda_one);
    run.param("classify", !args.no_classify);
    let g = load_group(&mut run, &args.gens)?;
    let group_file = file_name(&args.gens);
    // Validates k before anything expensive.
    SearchJob::new(&g, args.k, args.lambda.unwrap_or(1))?;

    let outer = match &args.aut_gens {
        Some(p) => {
            let over = load_group(&mut run, p)?;
            let perms = transported_overgroup(&g, &over)?;
            Some((GroupInfo { file: file_name(p), degree: over.degree(), order: over.order() }, perms))
        }
        None => None,
    };

    let lambdas = match args.lambda {
        Some(l) => vec![l],
        None if args.include_lambda_one => [1].into_iter().chain(sweep_lambdas(args.k)).collect(),
        None => sweep_lambdas(args.k),
    };
    let opts = SearchOptions {
        classify: !args.no_classify,
        ..Default::default()
    };
    println!("group {group_file}: degree {}, order {}", g.degree(), g.order());
    let mut summary = Summary {
        group: GroupInfo { file: group_file.clone(), degree: g.degree(), order: g.order() },
        overgroup: None,
        k: args.k,
        lambdas: Vec::new(),
    };
    for lambda in lambdas {
        let started = Instant::now();
        let job = SearchJob::new(&g, args.k, lambda)?;
        let result = search::run(&job, &opts)?;
        let aut_orbits = match &outer {
            Some((_, perms)) => {
                let ds: Vec<Design> = result.designs.iter().map(|f| f.design.clone()).collect();
                Some(design_orbits(&ds, perms)?.len())
            }
            None => None,
        };
        let entry = persist(&mut run, &group_file, &result, aut_orbits)?;
        report(&entry, started.elapsed().as_secs_f64());
        summary.lambdas.push(entry);
    }
    summary.overgroup = outer.map(|(info, _)| info);
    eprintln!("search finished in {:.1} s", run.elapsed_secs());
    run.write_json("summary.json", &summary)?;
    run.finish()?;
    Ok(Status::Ok)
}

fn persist(run: &mut Run, group_file: &str, r: &SearchResult, aut_orbits: Option<usize>) -> anyhow::Result<LambdaSummary> {
    let mut files = Vec::with_capacity(r.designs.len());
    for (i, f) in r.designs.iter().enumerate() {
        let meta = DesignMeta {
            group_file: Some(group_file.into()),
            base_block: Some(f.base_block.iter().map(|p| p + 1).collect()),
            t: Some(2),
            lambda: Some(r.lambda),
            block_transitive: Some(true),
            flag_transitive: Some(f.flag_transitive),
            stabilizer_order: Some(f.stabilizer_order),
        };
        let name = format!("designs/lambda-{:02}/design-{i:03}.json", r.lambda);
        run.write(&name, DesignFile::from_design(&f.design, meta).to_json().as_bytes())?;
        files.push(name);
    }
    Ok(LambdaSummary {
        lambda: r.lambda,
        b: r.b,
        stabilizer_order: r.stabilizer_order,
        inadmissible_b: r.inadmissible_b,
        stats: r.stats.clone(),
        designs: r.design_count(),
        iso_classes: r.iso_class_count(),
        aut_orbits,
        flag_transitive: r.designs.iter().filter(|f| f.flag_transitive).count(),
        files,
        classes: r.iso.as_ref().map(|p| p.classes.clone()),
    })
}

fn report(s: &LambdaSummary, secs: f64) {
    let stab = s.stabilizer_order.map_or("-".into(), |m| m.to_string());
    let mut line = format!("λ = {:>2}: b = {:>5}, |G_B| = {stab:>4}", s.lambda, s.b);
    if s.inadmissible_b {
        line.push_str(", b does not divide |G|");
    } else {
        line.push_str(&format!(
            ", {} subgroup classes, {}",
            s.stats.subgroup_classes,
            count(s.designs, "design", "designs")
        ));
        if let Some(c) = s.iso_classes {
            line.push_str(&format!(", {}", count(c, "isomorphism class", "isomorphism classes")));
        }
        if let Some(a) = s.aut_orbits {
            line.push_str(&format!(", {a} up to the overgroup"));
        }
        line.push_str(&format!(", {} flag-transitive", s.flag_transitive));
    }
    println!("{line}  ({secs:.1} s)");
}

fn count(n: usize, one: &str, many: &str) -> String {
    format!("{n} {}", if n == 1 { one } else { many })
}
