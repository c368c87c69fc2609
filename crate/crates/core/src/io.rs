//! Shared CSV formatting helpers.
//!
//! All numeric output goes through [`format_float`] so files are
//! byte-for-byte reproducible across runs and platforms.

/// Scientific notation with 13 significant digits. Negative zero prints as
/// zero so equal values always format identically.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.12e}")
}

/// Header comparison tolerant of whitespace around commas.
pub fn trim_header(line: &str) -> String {
    line.split(',').map(str::trim).collect::<Vec<_>>().join(",")
}

/// Writes rows of floats as CSV under the given header.
pub fn write_csv_rows<W: std::io::Write>(
    mut w: W,
    header: &str,
    rows: impl Iterator<Item = Vec<f64>>,
) -> std::io::Result<()> {
    writeln!(w, "{header}")?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// Same rows in gnuplot-friendly form: `#`-prefixed header, space-separated
/// columns.
pub fn write_plot_rows<W: std::io::Write>(
    mut w: W,
    header: &str,
    rows: impl Iterator<Item = Vec<f64>>,
) -> std::io::Result<()> {
    writeln!(w, "# {}", trim_header(header).replace(',', " "))?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|&x| format_float(x)).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}
