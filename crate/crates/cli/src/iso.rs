use designforge::design::DesignFile;
use designforge::iso::iso_classes;
use designforge::Design;
use serde::Serialize;

use crate::output::Run;
use crate::{IsoArgs, Status};

#[derive(Serialize)]
struct Class {
    size: usize,
    representative: String,
    members: Vec<String>,
}

#[derive(Serialize)]
struct Partition {
    designs: usize,
    class_count: usize,
    classes: Vec<Class>,
}

pub fn run(args: &IsoArgs) -> anyhow::Result<Status> {
    let mut run = Run::new("iso", args.out.as_deref())?;
    let names: Vec<String> = args.inputs.iter().map(|p| p.display().to_string()).collect();
    let designs = args
        .inputs
        .iter()
        .map(|p| Ok(DesignFile::from_json(&run.read_input(p)?)?.to_design()?))
        .collect::<anyhow::Result<Vec<Design>>>()?;
    let p = iso_classes(&designs);
    let partition = Partition {
        designs: designs.len(),
        class_count: p.class_count(),
        classes: p
            .classes
            .iter()
            .zip(&p.representatives)
            .map(|(members, &rep)| Class {
                size: members.len(),
                representative: names[rep].clone(),
                members: members.iter().map(|&i| names[i].clone()).collect(),
            })
            .collect(),
    };
    println!("{} designs, {} isomorphism classes", partition.designs, partition.class_count);
    for (i, c) in partition.classes.iter().enumerate() {
        println!("class {i}: size {}, representative {}", c.size, c.representative);
    }
    run.write_json("partition.json", &partition)?;
    run.finish()?;
    Ok(Status::Ok)
}
