use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BenchError, BenchResult};
use crate::query::{Engine, Materialization, Params, Value};
use crate::store::{GraphStore, PropertyValue};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AblationConfig {
    pub nodes: usize,
    pub degree: usize,
    pub properties: usize,
    pub runs: usize,
    pub seed: u64,
}

impl Default for AblationConfig {
    fn default() -> Self {
        AblationConfig {
            nodes: 100_000,
            degree: 10,
            properties: 8,
            runs: 5,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub samples_ms: Vec<f64>,
    pub median_ms: f64,
    /// FullClone median over this median.
    pub speedup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeTimings {
    pub mode: Materialization,
    pub one_hop: Timing,
    pub two_hop: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationReport {
    pub config: AblationConfig,
    pub one_hop_query: String,
    pub two_hop_query: String,
    pub one_hop_rows: usize,
    pub two_hop_rows: usize,
    pub modes: Vec<ModeTimings>,
}

impl AblationReport {
    pub fn mode(&self, m: Materialization) -> &ModeTimings {
        self.modes
            .iter()
            .find(|t| t.mode == m)
            .expect("every mode is timed")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{:<18} {:>12} {:>8} {:>12} {:>8}\n",
            "mode", "1-hop ms", "speedup", "2-hop ms", "speedup"
        );
        for t in &self.modes {
            s.push_str(&format!(
                "{:<18} {:>12.2} {:>7.2}x {:>12.2} {:>7.2}x\n",
                t.mode.name(),
                t.one_hop.median_ms,
                t.one_hop.speedup,
                t.two_hop.median_ms,
                t.two_hop.speedup
            ));
        }
        s.push_str(&format!(
            "rows: 1-hop {}, 2-hop {}\n",
            self.one_hop_rows, self.two_hop_rows
        ));
        s
    }
}

pub fn median(samples: &[f64]) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Uniform random out-edges; property 0 is the integer `id`, the rest
/// alternate between 16-character strings and integers.
pub fn ablation_graph(cfg: &AblationConfig) -> GraphStore {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut g = GraphStore::new();
    let mut ids = Vec::with_capacity(cfg.nodes);
    for i in 0..cfg.nodes {
        let mut props = Vec::with_capacity(cfg.properties);
        props.push(("id".to_owned(), PropertyValue::Int(i as i64)));
        for p in 1..cfg.properties {
            let v = if p % 2 == 1 {
                let s: String = (0..16)
                    .map(|_| rng.random_range(b'a'..=b'z') as char)
                    .collect();
                PropertyValue::String(s)
            } else {
                PropertyValue::Int(rng.random_range(0..1_000_000))
            };
            props.push((format!("p{p}"), v));
        }
        ids.push(
            g.create_node(&["Node"], props)
                .expect("fresh labels and keys"),
        );
    }
    let none: Vec<(String, PropertyValue)> = Vec::new();
    for &a in &ids {
        for _ in 0..cfg.degree {
            let b = ids[rng.random_range(0..ids.len())];
            g.create_edge(a, b, "LINK", none.clone())
                .expect("live endpoints");
        }
    }
    g
}

fn canonical(mut rows: Vec<Vec<Value>>) -> Vec<Vec<Value>> {
    rows.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    rows
}

/// Times the fixed 1-hop and 2-hop queries under every materialization
/// mode. Timing starts only after all modes have returned the same rows.
pub fn run_ablation(cfg: &AblationConfig) -> BenchResult<AblationReport> {
    if cfg.properties < 3 || cfg.nodes < 100 || cfg.runs == 0 {
        return Err(BenchError::InvalidParameter(
            "ablation needs ≥ 3 properties, ≥ 100 nodes and ≥ 1 run".into(),
        ));
    }
    let engine = Engine::new(ablation_graph(cfg).into_shared());
    let one =
        "MATCH (a:Node)-[:LINK]->(b:Node) WHERE a.id < $frontier RETURN a.p1, b.p2".to_owned();
    let two = "MATCH (a:Node)-[:LINK]->(b:Node)-[:LINK]->(c:Node) WHERE a.id < $frontier RETURN a.p1, c.p2".to_owned();
    let frontier = |f: usize| Params::from([("frontier".to_owned(), PropertyValue::Int(f as i64))]);
    let queries = [
        (one.clone(), frontier(cfg.nodes / 10)),
        (two.clone(), frontier(cfg.nodes / 100)),
    ];

    let mut rows = [0usize; 2];
    for (qi, (text, params)) in queries.iter().enumerate() {
        let mut first: Option<Vec<Vec<Value>>> = None;
        for mode in Materialization::ALL {
            let got = canonical(engine.run_with(text, params, mode)?.rows);
            match &first {
                None => {
                    rows[qi] = got.len();
                    first = Some(got);
                }
                Some(f) if *f != got => {
                    return Err(BenchError::Inequivalent(format!(
                        "{text} under {}",
                        mode.name()
                    )))
                }
                Some(_) => {}
            }
        }
    }

    let mut samples = vec![[Vec::new(), Vec::new()]; Materialization::ALL.len()];
    for _ in 0..cfg.runs {
        for (mi, mode) in Materialization::ALL.into_iter().enumerate() {
            for (qi, (text, params)) in queries.iter().enumerate() {
                let start = Instant::now();
                let out = engine.run_with(text, params, mode)?;
                let ms = start.elapsed().as_secs_f64() * 1e3;
                debug_assert_eq!(out.rows.len(), rows[qi]);
                samples[mi][qi].push(ms);
            }
        }
    }
    let base = [median(&samples[0][0]), median(&samples[0][1])];
    let timing = |s: &Vec<f64>, b: f64| {
        let m = median(s);
        Timing {
            samples_ms: s.clone(),
            median_ms: m,
            speedup: b / m,
        }
    };
    let modes = Materialization::ALL
        .into_iter()
        .zip(&samples)
        .map(|(mode, s)| ModeTimings {
            mode,
            one_hop: timing(&s[0], base[0]),
            two_hop: timing(&s[1], base[1]),
        })
        .collect();
    Ok(AblationReport {
        config: cfg.clone(),
        one_hop_query: one,
        two_hop_query: two,
        one_hop_rows: rows[0],
        two_hop_rows: rows[1],
        modes,
    })
}
