use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::datasets::{desk_datasets, load_dataset};
use super::reference::{generate_reference, OracleParams, RawGraph, RefValue, Reference};
use super::{io_err, BenchError, BenchResult};
use crate::algos::{self, PageRankMode, UNREACHABLE};
use crate::csr::GraphView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValidationAlgorithm {
    Bfs,
    PageRank,
    Wcc,
    Cdlp,
    Lcc,
    Sssp,
    Scc,
}

impl ValidationAlgorithm {
    pub const ALL: [ValidationAlgorithm; 7] = [
        ValidationAlgorithm::Bfs,
        ValidationAlgorithm::PageRank,
        ValidationAlgorithm::Wcc,
        ValidationAlgorithm::Cdlp,
        ValidationAlgorithm::Lcc,
        ValidationAlgorithm::Sssp,
        ValidationAlgorithm::Scc,
    ];

    /// The six algorithms of the desk suite.
    pub const SUITE: [ValidationAlgorithm; 6] = [
        ValidationAlgorithm::Bfs,
        ValidationAlgorithm::PageRank,
        ValidationAlgorithm::Wcc,
        ValidationAlgorithm::Cdlp,
        ValidationAlgorithm::Lcc,
        ValidationAlgorithm::Sssp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ValidationAlgorithm::Bfs => "bfs",
            ValidationAlgorithm::PageRank => "pagerank",
            ValidationAlgorithm::Wcc => "wcc",
            ValidationAlgorithm::Cdlp => "cdlp",
            ValidationAlgorithm::Lcc => "lcc",
            ValidationAlgorithm::Sssp => "sssp",
            ValidationAlgorithm::Scc => "scc",
        }
    }

    pub fn comparison(self) -> ComparisonMode {
        match self {
            ValidationAlgorithm::Bfs => ComparisonMode::Exact,
            ValidationAlgorithm::PageRank => ComparisonMode::Epsilon(1e-6),
            ValidationAlgorithm::Lcc | ValidationAlgorithm::Sssp => ComparisonMode::Epsilon(1e-9),
            ValidationAlgorithm::Wcc | ValidationAlgorithm::Cdlp | ValidationAlgorithm::Scc => {
                ComparisonMode::EquivalenceClasses
            }
        }
    }
}

impl fmt::Display for ValidationAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ValidationAlgorithm {
    type Err = BenchError;
    fn from_str(s: &str) -> BenchResult<Self> {
        ValidationAlgorithm::ALL
            .into_iter()
            .find(|a| {
                a.name().eq_ignore_ascii_case(s)
                    || (s.eq_ignore_ascii_case("pr") && *a == ValidationAlgorithm::PageRank)
            })
            .ok_or_else(|| BenchError::InvalidParameter(format!("unknown algorithm {s}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "epsilon", rename_all = "snake_case")]
pub enum ComparisonMode {
    Exact,
    Epsilon(f64),
    EquivalenceClasses,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationCase {
    pub dataset: String,
    pub vertex_file: PathBuf,
    pub edge_file: PathBuf,
    pub directed: bool,
    pub weighted: bool,
    pub algorithm: ValidationAlgorithm,
    #[serde(default)]
    pub source: Option<u64>,
    #[serde(default = "default_damping")]
    pub damping: f64,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    pub reference: PathBuf,
}

fn default_damping() -> f64 {
    algos::DEFAULT_DAMPING
}

fn default_iterations() -> usize {
    10
}

impl ValidationCase {
    pub fn comparison(&self) -> ComparisonMode {
        self.algorithm.comparison()
    }

    fn oracle_params(&self) -> OracleParams {
        OracleParams {
            source: self.source,
            damping: self.damping,
            iterations: self.iterations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseReport {
    pub dataset: String,
    pub algorithm: ValidationAlgorithm,
    pub mode: ComparisonMode,
    pub passed: bool,
    pub vertices: usize,
    pub mismatches: usize,
    /// Largest per-vertex difference for epsilon comparisons.
    pub max_error: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: usize,
    pub total: usize,
    pub cases: Vec<CaseReport>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{:<16} {:<9} {:<7} {:>9} {:>10}  detail\n",
            "dataset", "algorithm", "result", "vertices", "max_err"
        );
        for c in &self.cases {
            s.push_str(&format!(
                "{:<16} {:<9} {:<7} {:>9} {:>10.2e}  {}\n",
                c.dataset,
                c.algorithm.name(),
                if c.passed { "PASS" } else { "FAIL" },
                c.vertices,
                c.max_error,
                c.detail
            ));
        }
        s.push_str(&format!("{}/{} passed\n", self.passed, self.total));
        s
    }
}

/// Compares an algorithm output against a reference under `mode`.
pub fn validate_output(
    reference: &Reference,
    output: &Reference,
    mode: ComparisonMode,
) -> (bool, usize, f64, String) {
    if reference.values.len() != output.values.len() {
        let d = format!(
            "{} reference values, {} output values",
            reference.values.len(),
            output.values.len()
        );
        return (
            false,
            reference.values.len().max(output.values.len()),
            0.0,
            d,
        );
    }
    if let Some((a, b)) = reference
        .values
        .iter()
        .zip(&output.values)
        .find(|(a, b)| a.0 != b.0)
    {
        return (
            false,
            1,
            0.0,
            format!("vertex sets differ at {} vs {}", a.0, b.0),
        );
    }
    let pairs = reference
        .values
        .iter()
        .zip(&output.values)
        .map(|(a, b)| (a.1, b.1));
    match mode {
        ComparisonMode::Exact => {
            let bad = pairs.filter(|(a, b)| a != b).count();
            (
                bad == 0,
                bad,
                0.0,
                if bad == 0 {
                    String::new()
                } else {
                    format!("{bad} values differ")
                },
            )
        }
        ComparisonMode::Epsilon(eps) => {
            let mut bad = 0;
            let mut worst: f64 = 0.0;
            for (a, b) in pairs {
                let inf = (a == RefValue::Infinity, b == RefValue::Infinity);
                if inf.0 || inf.1 {
                    bad += usize::from(inf.0 != inf.1);
                    continue;
                }
                let d = (a.as_f64() - b.as_f64()).abs();
                worst = worst.max(d);
                bad += usize::from(!(d <= eps));
            }
            (
                bad == 0,
                bad,
                worst,
                if bad == 0 {
                    String::new()
                } else {
                    format!("{bad} values beyond {eps:e}")
                },
            )
        }
        ComparisonMode::EquivalenceClasses => {
            let mut fwd: HashMap<u64, u64> = HashMap::new();
            let mut back: HashMap<u64, u64> = HashMap::new();
            let mut bad = 0;
            for (a, b) in pairs {
                let (RefValue::Int(a), RefValue::Int(b)) = (a, b) else {
                    bad += 1;
                    continue;
                };
                let ok = *fwd.entry(a).or_insert(b) == b && *back.entry(b).or_insert(a) == a;
                bad += usize::from(!ok);
            }
            (
                bad == 0,
                bad,
                0.0,
                if bad == 0 {
                    String::new()
                } else {
                    format!("{bad} vertices in different classes")
                },
            )
        }
    }
}

fn view_source(view: &GraphView, source: Option<u64>) -> BenchResult<usize> {
    let s = source.ok_or_else(|| BenchError::InvalidParameter("source vertex required".into()))?;
    view.external_ids()
        .iter()
        .position(|&e| e == s)
        .ok_or_else(|| BenchError::InvalidParameter(format!("unknown source vertex {s}")))
}

/// Runs the library routine for `case` on a loaded view.
pub fn run_algorithm(view: &GraphView, case: &ValidationCase) -> BenchResult<Reference> {
    let ints = |v: Vec<u64>| v.into_iter().map(RefValue::Int).collect::<Vec<_>>();
    let floats = |v: Vec<f64>| v.into_iter().map(RefValue::Float).collect::<Vec<_>>();
    let values = match case.algorithm {
        ValidationAlgorithm::Bfs => algos::bfs(view, view_source(view, case.source)?)?
            .into_iter()
            .map(|d| {
                if d == UNREACHABLE {
                    RefValue::Infinity
                } else {
                    RefValue::Int(d)
                }
            })
            .collect(),
        ValidationAlgorithm::Sssp => algos::sssp_dijkstra(view, view_source(view, case.source)?)?
            .into_iter()
            .map(|d| {
                if d.is_finite() {
                    RefValue::Float(d)
                } else {
                    RefValue::Infinity
                }
            })
            .collect(),
        ValidationAlgorithm::PageRank => floats(
            algos::page_rank(
                view,
                case.damping,
                PageRankMode::Iterations(case.iterations),
            )?
            .ranks,
        ),
        ValidationAlgorithm::Wcc => ints(algos::wcc(view)),
        ValidationAlgorithm::Scc => ints(algos::scc(view)),
        ValidationAlgorithm::Cdlp => ints(algos::cdlp(view, case.iterations)?),
        ValidationAlgorithm::Lcc => floats(algos::lcc(view)),
    };
    Ok(Reference::from_pairs(
        view.external_ids().iter().copied().zip(values).collect(),
    ))
}

fn report(case: &ValidationCase, reference: &Reference, output: &Reference) -> CaseReport {
    let (passed, mismatches, max_error, detail) =
        validate_output(reference, output, case.comparison());
    CaseReport {
        dataset: case.dataset.clone(),
        algorithm: case.algorithm,
        mode: case.comparison(),
        passed,
        vertices: output.values.len(),
        mismatches,
        max_error,
        detail,
    }
}

/// Loads the case's dataset, runs the algorithm and compares with the
/// reference file.
pub fn validate(case: &ValidationCase) -> BenchResult<CaseReport> {
    let reference = Reference::read(&case.reference)?;
    let loaded = load_dataset(
        &case.vertex_file,
        &case.edge_file,
        case.directed,
        case.weighted,
    )?;
    let output = run_algorithm(&loaded.view, case)?;
    Ok(report(case, &reference, &output))
}

/// Validates every case, loading each dataset once.
pub fn run_suite(cases: &[ValidationCase]) -> BenchResult<ValidationReport> {
    let mut loaded: HashMap<(PathBuf, PathBuf), GraphView> = HashMap::new();
    let mut reports = Vec::with_capacity(cases.len());
    for case in cases {
        let reference = Reference::read(&case.reference)?;
        let key = (case.vertex_file.clone(), case.edge_file.clone());
        if !loaded.contains_key(&key) {
            let d = load_dataset(
                &case.vertex_file,
                &case.edge_file,
                case.directed,
                case.weighted,
            )?;
            loaded.insert(key.clone(), d.view);
        }
        let output = run_algorithm(&loaded[&key], case)?;
        reports.push(report(case, &reference, &output));
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    Ok(ValidationReport {
        passed,
        total: reports.len(),
        cases: reports,
    })
}

pub const MANIFEST: &str = "manifest.json";

/// Writes the four desk datasets, their oracle references for the six suite
/// algorithms and a `manifest.json` listing the 24 cases.
pub fn prepare_desk_suite(dir: &Path, seed: u64) -> BenchResult<Vec<ValidationCase>> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut cases = Vec::new();
    for d in desk_datasets(seed) {
        let (vp, ep) = d.write(dir)?;
        let raw = RawGraph::read(&vp, &ep, d.directed)?;
        for alg in ValidationAlgorithm::SUITE {
            let case = ValidationCase {
                dataset: d.name.clone(),
                vertex_file: vp.clone(),
                edge_file: ep.clone(),
                directed: d.directed,
                weighted: d.weighted,
                algorithm: alg,
                source: Some(d.vertices[0]),
                damping: default_damping(),
                iterations: if alg == ValidationAlgorithm::PageRank {
                    20
                } else {
                    default_iterations()
                },
                reference: dir.join(format!("{}.{}.ref", d.name, alg.name())),
            };
            generate_reference(&raw, alg, &case.oracle_params())?.write(&case.reference)?;
            cases.push(case);
        }
    }
    let manifest = dir.join(MANIFEST);
    let json = serde_json::to_string_pretty(&cases).map_err(|e| io_err(&manifest, e))?;
    std::fs::write(&manifest, json).map_err(|e| io_err(&manifest, e))?;
    Ok(cases)
}

pub fn read_manifest(path: &Path) -> BenchResult<Vec<ValidationCase>> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: &[(u64, RefValue)]) -> Reference {
        Reference::from_pairs(v.to_vec())
    }

    #[test]
    fn output_against_its_own_copy_passes() {
        let a = r(&[(1, RefValue::Float(0.25)), (2, RefValue::Infinity)]);
        for mode in [ComparisonMode::Exact, ComparisonMode::Epsilon(1e-9)] {
            assert!(validate_output(&a, &a.clone(), mode).0);
        }
    }

    #[test]
    fn permuted_labels_are_equivalent() {
        let a = r(&[
            (1, RefValue::Int(1)),
            (2, RefValue::Int(1)),
            (3, RefValue::Int(3)),
        ]);
        let b = r(&[
            (1, RefValue::Int(9)),
            (2, RefValue::Int(9)),
            (3, RefValue::Int(4)),
        ]);
        assert!(validate_output(&a, &b, ComparisonMode::EquivalenceClasses).0);
        let merged = r(&[
            (1, RefValue::Int(9)),
            (2, RefValue::Int(9)),
            (3, RefValue::Int(9)),
        ]);
        assert!(!validate_output(&a, &merged, ComparisonMode::EquivalenceClasses).0);
    }

    #[test]
    fn infinity_must_match_exactly() {
        let a = r(&[(1, RefValue::Infinity)]);
        let b = r(&[(1, RefValue::Float(1e300))]);
        assert!(!validate_output(&a, &b, ComparisonMode::Epsilon(f64::INFINITY)).0);
    }

    #[test]
    fn epsilon_bounds_the_error() {
        let a = r(&[(1, RefValue::Float(0.5))]);
        let b = r(&[(1, RefValue::Float(0.5 + 2e-6))]);
        let (ok, bad, worst, _) = validate_output(&a, &b, ComparisonMode::Epsilon(1e-6));
        assert!(!ok && bad == 1 && (worst - 2e-6).abs() < 1e-12);
    }

    #[test]
    fn manifest_round_trips() {
        let case = ValidationCase {
            dataset: "d".into(),
            vertex_file: "d.v".into(),
            edge_file: "d.e".into(),
            directed: true,
            weighted: false,
            algorithm: ValidationAlgorithm::Cdlp,
            source: None,
            damping: 0.85,
            iterations: 10,
            reference: "d.cdlp.ref".into(),
        };
        let json = serde_json::to_string(&vec![case.clone()]).unwrap();
        let back: Vec<ValidationCase> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![case]);
        assert_eq!(
            "PR".parse::<ValidationAlgorithm>().unwrap(),
            ValidationAlgorithm::PageRank
        );
    }
}
