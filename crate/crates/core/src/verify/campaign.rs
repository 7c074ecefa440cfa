//! Verification campaigns: run the whole pipeline on many instances and
//! partial automorphisms and aggregate the outcome.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::extend::{extend_automorphism, extend_automorphism_shuffled};
use crate::generate::{normalized_tournaments, random_normalized_tournament};
use crate::graph::{PartialMap, PartiteDigraph, Tournament, Vertex};
use crate::normalize::normalize;
use crate::verify::check::{verify_automorphism, verify_embedding, verify_extends};
use crate::verify::enumerate::{enumerate_partial_automorphisms, random_partial_automorphism};
use crate::verify::oracle::{find_extending_automorphism, OracleError, DEFAULT_ORACLE_BUDGET};
use crate::witness::{build_witness_with, Witness, WitnessOptions};

/// Diagnostics kept per instance; counts are always exact.
pub const MAX_FAILURES_PER_INSTANCE: usize = 32;

#[derive(Clone, Debug)]
pub enum InstanceSource {
    /// Every normalized tournament with `n` parts on `k` vertices, for each
    /// multiple `k` of `n` in `min_k..=max_k`.
    Exhaustive { n: usize, min_k: usize, max_k: usize },
    /// `count` random normalized tournaments with `n` parts on `k` vertices.
    Sampled { n: usize, k: usize, count: usize },
    /// Explicit tournaments, normalized before use.
    Given(Vec<Tournament>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiSelection {
    /// Every partial automorphism with at most `max_dom` domain vertices.
    All { max_dom: usize },
    /// `count` random partial automorphisms per instance.
    Sampled { count: usize, max_dom: usize },
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub instances: InstanceSource,
    pub phis: PhiSelection,
    pub seed: u64,
    /// Cross-check every map with the search oracle.
    pub oracle: bool,
    /// Extra extensions per map with randomly chosen completions.
    pub shuffled_completions: usize,
    pub witness: WitnessOptions,
    pub oracle_budget: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            instances: InstanceSource::Given(Vec::new()),
            phis: PhiSelection::All { max_dom: usize::MAX },
            seed: 0,
            oracle: false,
            shuffled_completions: 0,
            witness: WitnessOptions::default(),
            oracle_budget: DEFAULT_ORACLE_BUDGET,
            jobs: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Embedding,
    Extension,
    Automorphism,
    Extends,
    ShuffledCompletion,
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    /// The partial automorphism, on the vertices of the input tournament.
    pub phi: PartialMap,
    pub check: CheckKind,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    pub index: usize,
    pub k: usize,
    pub n: usize,
    pub normalized_k: usize,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub descriptor: InstanceDescriptor,
    pub witness_order: Option<usize>,
    pub embedding_verified: bool,
    pub tested: usize,
    pub passed: usize,
    pub failed: usize,
    pub oracle_checked: usize,
    pub failures: Vec<Failure>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub instances: usize,
    pub tested: usize,
    pub passed: usize,
    pub failed: usize,
    pub oracle_checked: usize,
    pub embedding_failures: usize,
    pub errors: usize,
    pub details: Vec<InstanceReport>,
}

impl VerificationReport {
    pub fn is_success(&self) -> bool {
        self.failed == 0 && self.errors == 0 && self.embedding_failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn push(&mut self, r: InstanceReport) {
        self.instances += 1;
        self.tested += r.tested;
        self.passed += r.passed;
        self.failed += r.failed;
        self.oracle_checked += r.oracle_checked;
        self.embedding_failures += usize::from(r.witness_order.is_some() && !r.embedding_verified);
        self.errors += usize::from(r.error.is_some());
        self.details.push(r);
    }
}

struct Instance {
    descriptor: InstanceDescriptor,
    tournament: Tournament,
}

fn expand_instances(config: &CampaignConfig) -> Vec<Instance> {
    let randomized = !matches!(config.phis, PhiSelection::All { .. }) || config.shuffled_completions > 0;
    let seed = |sampled: bool| (sampled || randomized).then_some(config.seed);
    let descriptor = |index: usize, t: &Tournament, seed: Option<u64>| InstanceDescriptor {
        index,
        k: t.order(),
        n: t.part_count(),
        normalized_k: 0,
        seed,
    };
    let tournaments: Vec<(Tournament, Option<u64>)> = match &config.instances {
        InstanceSource::Exhaustive { n, min_k, max_k } => (*min_k.max(n)..=*max_k)
            .filter(|k| k % n == 0)
            .flat_map(|k| normalized_tournaments(*n, k))
            .map(|t| (t, seed(false)))
            .collect(),
        InstanceSource::Sampled { n, k, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            (0..*count)
                .map(|_| (random_normalized_tournament(*n, *k, &mut rng), seed(true)))
                .collect()
        }
        InstanceSource::Given(ts) => ts.iter().cloned().map(|t| (t, seed(false))).collect(),
    };
    tournaments
        .into_iter()
        .enumerate()
        .map(|(index, (tournament, seed))| Instance {
            descriptor: descriptor(index, &tournament, seed),
            tournament,
        })
        .collect()
}

/// Runs the pipeline on every configured instance. Instances are processed
/// in parallel; the report lists them in generation order and is identical
/// across runs with the same configuration.
pub fn run_campaign(config: &CampaignConfig) -> VerificationReport {
    let instances = expand_instances(config);
    let work = || -> Vec<InstanceReport> {
        instances
            .par_iter()
            .map(|inst| run_instance(config, inst))
            .collect()
    };
    let results = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    };
    let mut report = VerificationReport::default();
    for r in results {
        report.push(r);
    }
    report
}

fn instance_rng(config: &CampaignConfig, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64 + 1);
    rng
}

fn run_instance(config: &CampaignConfig, inst: &Instance) -> InstanceReport {
    let t = &inst.tournament;
    let norm = normalize(t);
    let mut report = InstanceReport {
        descriptor: InstanceDescriptor {
            normalized_k: norm.k(),
            ..inst.descriptor.clone()
        },
        witness_order: None,
        embedding_verified: false,
        tested: 0,
        passed: 0,
        failed: 0,
        oracle_checked: 0,
        failures: Vec::new(),
        error: None,
    };
    let w = match build_witness_with(&norm, &config.witness) {
        Ok(w) => w,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    report.witness_order = Some(w.order());

    let mut failures = Vec::new();
    match verify_embedding(&norm, &w, w.psi_image()) {
        Ok(()) => report.embedding_verified = true,
        Err(e) => failures.push(Failure {
            phi: PartialMap::new(),
            check: CheckKind::Embedding,
            detail: e.to_string(),
        }),
    }

    let mut rng = instance_rng(config, inst.descriptor.index);
    let phis: Vec<PartialMap> = match config.phis {
        PhiSelection::All { max_dom } => enumerate_partial_automorphisms(t, max_dom).collect(),
        PhiSelection::Sampled { count, max_dom } => (0..count)
            .map(|_| random_partial_automorphism(t, max_dom, &mut rng))
            .collect(),
    };

    let mut oracle = config.oracle;
    if oracle && w.order() > config.oracle_budget {
        report.error = Some(
            OracleError::TooLarge {
                order: w.order(),
                budget: config.oracle_budget,
            }
            .to_string(),
        );
        oracle = false;
    }

    let to_witness = |v: Vertex| w.psi(norm.relabel(v));
    for phi in phis {
        let on_witness = phi.transport(to_witness);
        let before = failures.len();
        check_phi(&w, &phi, &on_witness, config, &mut rng, &mut failures);
        if oracle {
            report.oracle_checked += 1;
            check_oracle(&w, &phi, &on_witness, config.oracle_budget, &mut failures);
        }
        report.tested += 1;
        if failures.len() == before {
            report.passed += 1;
        } else {
            report.failed += 1;
        }
    }
    failures.truncate(MAX_FAILURES_PER_INSTANCE);
    report.failures = failures;
    report
}

fn check_phi(
    w: &Witness,
    phi: &PartialMap,
    on_witness: &PartialMap,
    config: &CampaignConfig,
    rng: &mut ChaCha8Rng,
    failures: &mut Vec<Failure>,
) {
    let fail = |check, detail: String| Failure {
        phi: phi.clone(),
        check,
        detail,
    };
    match extend_automorphism(w, on_witness) {
        Err(e) => failures.push(fail(CheckKind::Extension, e.to_string())),
        Ok(cert) => {
            if let Err(e) = verify_automorphism(w, &cert.theta) {
                failures.push(fail(CheckKind::Automorphism, e.to_string()));
            }
            if let Err(e) = verify_extends(&cert.theta, on_witness) {
                failures.push(fail(CheckKind::Extends, e.to_string()));
            }
        }
    }
    for round in 0..config.shuffled_completions {
        let outcome = extend_automorphism_shuffled(w, on_witness, rng)
            .map_err(|e| e.to_string())
            .and_then(|cert| {
                verify_automorphism(w, &cert.theta).map_err(|e| e.to_string())?;
                verify_extends(&cert.theta, on_witness).map_err(|e| e.to_string())
            });
        if let Err(e) = outcome {
            failures.push(fail(CheckKind::ShuffledCompletion, format!("round {round}: {e}")));
        }
    }
}

fn check_oracle(
    w: &Witness,
    phi: &PartialMap,
    on_witness: &PartialMap,
    budget: usize,
    failures: &mut Vec<Failure>,
) {
    let detail = match find_extending_automorphism(w, on_witness, budget) {
        Ok(Some(found)) => match verify_automorphism(w, &found) {
            Ok(()) => match verify_extends(&found, on_witness) {
                Ok(()) => return,
                Err(e) => format!("oracle map does not extend: {e}"),
            },
            Err(e) => format!("oracle map is not an automorphism: {e}"),
        },
        Ok(None) => "no extending automorphism found".to_string(),
        Err(e) => e.to_string(),
    };
    failures.push(Failure {
        phi: phi.clone(),
        check: CheckKind::Oracle,
        detail,
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_campaign_is_vacuous() {
        let report = run_campaign(&CampaignConfig::default());
        assert_eq!((report.tested, report.failed), (0, 0));
        assert!(report.is_success());
    }

    #[test]
    fn smallest_instance_all_maps() {
        let t = Tournament::new(2, vec![1, 2], [(1, 2)]).unwrap();
        let report = run_campaign(&CampaignConfig {
            instances: InstanceSource::Given(vec![t]),
            phis: PhiSelection::All { max_dom: 2 },
            oracle: true,
            ..CampaignConfig::default()
        });
        assert_eq!((report.tested, report.passed, report.failed), (6, 6, 0));
        assert_eq!(report.oracle_checked, 6);
        assert!(report.is_success());
    }

    #[test]
    fn unnormalized_input_is_padded() {
        // parts of sizes 1 and 2
        let t = Tournament::new(2, vec![1, 2, 2], [(1, 2), (3, 1)]).unwrap();
        let report = run_campaign(&CampaignConfig {
            instances: InstanceSource::Given(vec![t]),
            shuffled_completions: 2,
            seed: 11,
            ..CampaignConfig::default()
        });
        assert_eq!(report.details[0].descriptor.normalized_k, 4);
        assert_eq!(report.details[0].witness_order, Some(16));
        assert!(report.is_success(), "{}", report.to_json());
    }

    #[test]
    fn budget_errors_do_not_abort() {
        let t = Tournament::new(2, vec![1, 2], [(1, 2)]).unwrap();
        let big = Tournament::from_orientation(2, vec![1, 1, 2, 2], |_, _| true).unwrap();
        let report = run_campaign(&CampaignConfig {
            instances: InstanceSource::Given(vec![big, t]),
            witness: WitnessOptions {
                vertex_budget: 8,
                ..WitnessOptions::default()
            },
            ..CampaignConfig::default()
        });
        assert_eq!(report.errors, 1);
        assert!(report.details[0].error.as_deref().unwrap().contains("16"));
        assert_eq!(report.details[1].tested, 6);
        assert!(!report.is_success());
    }
}
