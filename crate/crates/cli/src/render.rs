use arctensor::Report;

use crate::Format;

pub fn human(report: &Report) -> String {
    let status = if report.passed() { "PASS" } else { "FAIL" };
    let mut out = format!("{}: {status} ({} checks, {} ms)\n", report.command, report.checks.len(), report.elapsed_ms);
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &report.checks {
        let mark = if c.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!("  {mark} {:<width$}  {}/{} failed\n", c.name, c.failed, c.total));
        for w in &c.witnesses {
            out.push_str(&format!("       witness {w}\n"));
        }
    }
    for (k, v) in &report.observations {
        let text = v.to_string();
        if text.len() <= 120 {
            out.push_str(&format!("  note {k} = {text}\n"));
        } else {
            out.push_str(&format!("  note {k} = ({} bytes, see --format json)\n", text.len()));
        }
    }
    out
}

/// JSON mode: report on stdout, summary on stderr. Human mode: summary on stdout.
pub fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
            eprint!("{}", human(report));
        }
        Format::Human => print!("{}", human(report)),
    }
}
