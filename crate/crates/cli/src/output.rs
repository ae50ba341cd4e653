use crate::manifest::RunManifest;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

/// Routes results to stdout and, when an output directory is set, to files
/// recorded in the manifest.
pub struct Sink {
    dir: Option<PathBuf>,
    pub manifest: RunManifest,
}

impl Sink {
    pub fn new(command: &str, dir: Option<PathBuf>, config: Value) -> anyhow::Result<Self> {
        if let Some(d) = &dir {
            std::fs::create_dir_all(d)?;
        }
        let mut manifest = RunManifest::start(command);
        manifest.config = config;
        Ok(Self { dir, manifest })
    }

    /// Prints pretty JSON and saves it as `<name>.json`.
    pub fn json(&mut self, name: &str, value: &impl Serialize) -> anyhow::Result<()> {
        println!("{}", serde_json::to_string_pretty(value)?);
        self.save_json(name, value)
    }

    pub fn save_json(&mut self, name: &str, value: &impl Serialize) -> anyhow::Result<()> {
        if let Some(d) = &self.dir {
            let path = d.join(format!("{name}.json"));
            std::fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
            self.manifest.outputs.push(path);
        }
        Ok(())
    }

    /// Writes `<name>.csv` with a header row; without an output directory
    /// the table goes to stdout only when `stdout_fallback` is set.
    pub fn table<R: Serialize>(&mut self, name: &str, rows: &[R], stdout_fallback: bool) -> anyhow::Result<()> {
        match &self.dir {
            Some(d) => {
                let path = d.join(format!("{name}.csv"));
                write_csv(csv::Writer::from_path(&path)?, rows)?;
                self.manifest.outputs.push(path);
            }
            None if stdout_fallback => write_csv(csv::Writer::from_writer(std::io::stdout()), rows)?,
            None => {}
        }
        Ok(())
    }

    pub fn finish(self) -> anyhow::Result<ExitCode> {
        if let Some(d) = &self.dir {
            self.manifest.finish(d)?;
        }
        Ok(ExitCode::SUCCESS)
    }
}

fn write_csv<W: std::io::Write, R: Serialize>(mut w: csv::Writer<W>, rows: &[R]) -> anyhow::Result<()> {
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Diagnostic object printed on stderr when a command fails.
pub fn error_json(e: &anyhow::Error) -> Value {
    use inelastic_kfp::Error as E;
    let kind = match e.downcast_ref::<E>() {
        Some(E::Pole { .. }) => "pole",
        Some(E::Domain(_)) => "domain",
        Some(E::Overflow { .. }) => "overflow",
        Some(E::Quadrature { .. }) => "quadrature",
        Some(E::BounceCap { .. }) => "bounce_cap",
        Some(E::Config(_)) => "config",
        Some(E::IllConditioned { .. }) => "ill_conditioned",
        Some(E::NegativeOriginMass { .. }) => "negative_origin_mass",
        Some(E::NoConvergence { .. }) => "no_convergence",
        None => "other",
    };
    json!({ "error": kind, "message": format!("{e:#}") })
}
