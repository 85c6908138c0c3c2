use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// Round-trip decimal: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    fn write(&self, manifest: &[String], w: &mut impl Write) -> io::Result<()> {
        for line in manifest {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Writes the table with `#` manifest lines. The wall-clock time goes to a
/// `<out>.manifest` sidecar (or stderr) so reruns give identical CSV.
pub fn emit(table: &Table, manifest: &[String], out: Option<&Path>, elapsed: f64) -> io::Result<()> {
    match out {
        Some(path) => {
            let mut buf = Vec::new();
            table.write(manifest, &mut buf)?;
            fs::write(path, buf)?;
            let mut side = manifest.join("\n");
            side.push_str(&format!("\nwall_clock_s: {elapsed:.3}\noutput: {}\n", path.display()));
            let mut sidecar = path.as_os_str().to_owned();
            sidecar.push(".manifest");
            fs::write(sidecar, side)
        }
        None => {
            let stdout = io::stdout();
            table.write(manifest, &mut stdout.lock())?;
            log::info!("wall clock {elapsed:.3} s");
            Ok(())
        }
    }
}
