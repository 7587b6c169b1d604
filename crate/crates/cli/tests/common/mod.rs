#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use eods::screen::select_extremes;
use eods::sim::{generate_dataset, ResidualFamily, ResidualSampler, SimScenario};
use rand::rngs::StdRng;
use rand::SeedableRng;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("data")
}

pub fn eods(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eods"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub struct Study {
    pub y: Vec<f64>,
    /// Biomarker columns; `None` for untested subjects.
    pub markers: Vec<(String, Vec<Option<f64>>)>,
}

impl Study {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("id,y");
        for (name, _) in &self.markers {
            s.push(',');
            s.push_str(name);
        }
        s.push('\n');
        for (i, y) in self.y.iter().enumerate() {
            s.push_str(&format!("s{:04},{y}", i + 1));
            for (_, col) in &self.markers {
                match col[i] {
                    Some(v) => s.push_str(&format!(",{v}")),
                    None => s.push_str(",NA"),
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) {
        std::fs::write(path, self.to_csv()).unwrap();
    }
}

/// Simulated extreme-sampled study: the first biomarker follows the forward
/// model, `extra_nulls` more are independent standard normals.
pub fn simulated_study(
    n_full: usize,
    gamma: f64,
    beta_y: f64,
    family: ResidualFamily,
    seed: u64,
    extra_nulls: usize,
) -> Study {
    let scenario = SimScenario {
        n_full,
        gamma,
        beta_y,
        residual_family: family,
        seed,
        ..SimScenario::default()
    };
    let data = generate_dataset(&scenario, 0).unwrap();
    let picked = if gamma < 1.0 {
        select_extremes(&data.y, gamma).unwrap().indices()
    } else {
        (0..n_full).collect()
    };
    let mut tested = vec![false; n_full];
    for i in picked {
        tested[i] = true;
    }
    let mut markers = vec![(
        "x".to_string(),
        (0..n_full).map(|i| tested[i].then_some(data.x[i])).collect(),
    )];
    let noise = ResidualSampler::new(ResidualFamily::Normal, 1.0).unwrap();
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
    for j in 0..extra_nulls {
        markers.push((
            format!("null{j:02}"),
            (0..n_full).map(|i| tested[i].then(|| noise.sample(&mut rng))).collect(),
        ));
    }
    Study { y: data.y, markers }
}

/// Parses a CSV produced by the tool into header and rows.
pub fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

pub fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}
