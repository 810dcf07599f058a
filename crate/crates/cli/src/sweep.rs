use lorentz_lab::minkowski::{sweep_plane, Family, PlaneGrid, RegionMap, SampleSpec};
use serde_json::json;

use crate::output::{with_ext, write_csv, write_json, Sink};
use crate::settings::Settings;
use crate::Fail;

pub fn run(s: &Settings) -> Result<bool, Fail> {
    let grid = s.raw("grid").map(PlaneGrid::parse).transpose()?.unwrap_or_default();
    let mut spec = SampleSpec::default();
    match s.raw("families") {
        None | Some("all") => {}
        Some(list) => spec.families = list.split(',').map(str::parse::<Family>).collect::<Result<_, _>>()?,
    }
    if let Some(sizes) = s.list("sizes")? {
        spec.sizes = sizes;
    }
    spec.instances = s.get_or("instances", spec.instances)?;
    let seed = s.get_or("seed", 0u64)?;
    let stem = s.raw("out").unwrap_or("region-map.csv");
    let csv = Sink::create(with_ext(stem, "csv"))?;
    let sidecar = Sink::create(with_ext(stem, "json"))?;
    let config = s.echo();

    let map = sweep_plane(&grid, &spec, seed);
    let (agree, admissible) = map.agreement();
    let inconsistent = map.rows().filter(|r| !r.consistent).count();
    println!("{} cells swept ({} rows), written to {}", map.cells.len(), map.rows().count(), csv.path().display());
    println!("{agree} of {admissible} admissible cells agree with the theoretical regions");
    if inconsistent > 0 {
        println!("{inconsistent} rows contradict a proven region");
    }
    write_csv(csv, "sweep", &config, &RegionMap::CSV_HEADER, &map.csv_records())?;
    let mut body = serde_json::Map::new();
    body.insert("regionMap".into(), json!(map));
    write_json(sidecar, "sweep", &config, body)?;
    Ok(inconsistent == 0)
}
