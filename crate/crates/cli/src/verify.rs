use lorentz_lab::report::fmt_sig;
use lorentz_lab::suites::{run_suite, Suite};
use serde_json::json;

use crate::output::{preamble, write_json, Sink};
use crate::settings::Settings;
use crate::Fail;

pub fn run(s: &Settings) -> Result<bool, Fail> {
    let suite: Suite = s.require("suite")?;
    let sink = s.raw("out").map(Sink::create).transpose()?;
    let config = s.echo();
    let report = run_suite(suite)?;
    print!("{}", preamble("verify", &config));
    print!("{}", report.table());
    let failures: Vec<_> = report.failures().collect();
    println!(
        "{}: {} of {} checks pass, worst deviation {}",
        suite,
        report.cases.len() - failures.len(),
        report.cases.len(),
        fmt_sig(report.worst_deviation(), 3)
    );
    for c in &failures {
        println!(
            "FAIL {}: observed {} expected {} (deviation {} > {})",
            c.name,
            fmt_sig(c.observed, 17),
            fmt_sig(c.expected, 17),
            fmt_sig(c.deviation, 3),
            fmt_sig(c.tolerance, 3)
        );
    }
    if let Some(sink) = sink {
        let mut body = serde_json::Map::new();
        body.insert("report".into(), json!(report));
        write_json(sink, "verify", &config, body)?;
    }
    Ok(failures.is_empty())
}
