use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::Serialize;

#[derive(Debug, Default, Serialize)]
pub struct Budgets {
    pub max_rays: Option<usize>,
    pub max_probes: Option<usize>,
    pub max_weight: Option<usize>,
    pub stop_after: Option<usize>,
}

/// Everything needed to rerun a command and get the same outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub n: Option<usize>,
    pub order: Option<String>,
    pub seed: Option<u64>,
    pub budgets: Budgets,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub arith: String,
    pub threads: usize,
    pub version: &'static str,
    pub git_describe: &'static str,
    pub started_unix: u64,
    pub wall_clock_secs: f64,
    pub status: String,
    pub exit_code: i32,
    #[serde(skip)]
    clock: Option<Instant>,
}

impl RunManifest {
    pub fn start(command: &str, arith: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            argv: std::env::args().collect(),
            n: None,
            order: None,
            seed: None,
            budgets: Budgets::default(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            arith: arith.to_string(),
            threads: rayon::current_num_threads(),
            version: env!("CARGO_PKG_VERSION"),
            git_describe: env!("SUBCONE_GIT_DESCRIBE"),
            started_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            wall_clock_secs: 0.0,
            status: String::new(),
            exit_code: 0,
            clock: Some(Instant::now()),
        }
    }

    pub fn input(&mut self, p: &Path) {
        self.inputs.push(p.to_path_buf());
    }

    pub fn output(&mut self, p: &Path) {
        self.outputs.push(p.to_path_buf());
    }

    pub fn finish(&mut self, status: &str, exit_code: i32) {
        self.wall_clock_secs = self.clock.map_or(0.0, |c| c.elapsed().as_secs_f64());
        self.status = status.to_string();
        self.exit_code = exit_code;
    }

    /// Explicit path, else next to the first file output, else stderr.
    pub fn emit(&self, explicit: Option<&Path>) -> std::io::Result<()> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        let target = explicit.map(Path::to_path_buf).or_else(|| {
            self.outputs.iter().find(|p| p.as_os_str() != "-").map(|p| {
                let mut s = p.clone().into_os_string();
                s.push(".manifest.json");
                PathBuf::from(s)
            })
        });
        match target {
            Some(p) => std::fs::write(p, json + "\n"),
            None => {
                eprintln!("{}", serde_json::to_string(self).expect("manifest serializes"));
                Ok(())
            }
        }
    }
}
