use crate::distribution::DistReport;

/// Version of every CSV and JSON layout the CLI writes.
pub const SCHEMA_VERSION: u32 = 1;

/// `# gamma0-dims <kind> v1 key=value ...`
pub(crate) fn csv_header(kind: &str, fields: &[(&str, String)]) -> String {
    let mut s = format!("# gamma0-dims {kind} v{SCHEMA_VERSION}");
    for (k, v) in fields {
        s.push_str(&format!(" {k}={v}"));
    }
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub(crate) fn report_csv(r: &DistReport) -> String {
    let mut s = csv_header(
        "report",
        &[
            ("title", r.title.replace([' ', ','], "_")),
            ("passed", r.passed().to_string()),
            ("failures", r.failures().to_string()),
        ],
    );
    for v in &r.violations {
        s.push_str(&format!("# violation {v}\n"));
    }
    s.push_str("label,x,observed,reference,pass,aux,note\n");
    for row in &r.rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            csv_field(&row.label),
            row.x,
            row.observed,
            row.reference,
            row.pass,
            row.aux.map(|a| a.to_string()).unwrap_or_default(),
            csv_field(row.note.as_deref().unwrap_or("")),
        ));
    }
    s
}
