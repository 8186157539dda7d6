//! Cohort simulation and the replication loop.

use std::sync::Arc;

use rand::RngCore;

use crate::distributions::{EmpiricalDiscrete, TruncatedZeta};
use crate::rng::{derive_seed, stream, uniform};
use crate::{Error, Result};

/// Parameters of one (γ, n) experiment cell.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n_researchers: usize,
    pub gamma: f64,
    pub k_max: usize,
    pub m_replications: usize,
    pub master_seed: u64,
    pub citation_law: Arc<EmpiricalDiscrete>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_researchers < 1 {
            return Err(Error::Invalid("cohort size must be at least 1".into()));
        }
        if self.m_replications < 1 {
            return Err(Error::Invalid("replication count must be at least 1".into()));
        }
        if !(self.gamma > 1.0) {
            return Err(Error::domain(format!("gamma must exceed 1, got {}", self.gamma)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResearcherOutcome {
    pub publications: u64,
    pub citations: u64,
    pub ratio: f64,
}

impl ResearcherOutcome {
    pub fn new(publications: u64, citations: u64) -> Result<Self> {
        if publications == 0 {
            return Err(Error::Invalid("a researcher needs at least one publication".into()));
        }
        Ok(Self {
            publications,
            citations,
            ratio: citations as f64 / publications as f64,
        })
    }
}

/// AoR, RoA and the ratio/publications correlation of one cohort.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CohortStats {
    pub aor: f64,
    pub roa: f64,
    /// `None` when either variable has zero variance (or n < 2).
    pub corr: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone)]
pub struct ReplicationSet {
    pub config: ExperimentConfig,
    pub stats: Vec<CohortStats>,
}

impl ReplicationSet {
    pub fn aor(&self) -> Vec<f64> {
        self.stats.iter().map(|s| s.aor).collect()
    }

    pub fn roa(&self) -> Vec<f64> {
        self.stats.iter().map(|s| s.roa).collect()
    }

    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.stats.iter().map(|s| (s.aor, s.roa)).collect()
    }

    /// Defined correlations, plus the number of replications where it was undefined.
    pub fn correlations(&self) -> (Vec<f64>, usize) {
        let defined: Vec<f64> = self.stats.iter().filter_map(|s| s.corr).collect();
        let undefined = self.stats.len() - defined.len();
        (defined, undefined)
    }

    /// Fraction of replications with AoR strictly above RoA.
    pub fn fraction_aor_above(&self) -> f64 {
        let above = self.stats.iter().filter(|s| s.aor > s.roa).count();
        above as f64 / self.stats.len() as f64
    }
}

/// Draws a publication count, then one citation count per publication.
pub fn simulate_researcher<R: RngCore + ?Sized>(
    zeta: &TruncatedZeta,
    citations: &EmpiricalDiscrete,
    rng: &mut R,
) -> ResearcherOutcome {
    let publications = zeta.sample(uniform(rng)) as u64;
    let total: u64 = (0..publications).map(|_| citations.sample(uniform(rng))).sum();
    ResearcherOutcome::new(publications, total).expect("zeta support starts at 1")
}

pub fn cohort_aor(outcomes: &[ResearcherOutcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::Empty("cohort"));
    }
    Ok(outcomes.iter().map(|o| o.ratio).sum::<f64>() / outcomes.len() as f64)
}

pub fn cohort_roa(outcomes: &[ResearcherOutcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::Empty("cohort"));
    }
    let citations: u64 = outcomes.iter().map(|o| o.citations).sum();
    let publications: u64 = outcomes.iter().map(|o| o.publications).sum();
    Ok(citations as f64 / publications as f64)
}

/// Pearson correlation between ratios and publication counts.
///
/// Returns `Ok(None)` when either sample variance is zero.
pub fn cohort_correlation(outcomes: &[ResearcherOutcome]) -> Result<Option<f64>> {
    if outcomes.len() < 2 {
        return Err(Error::Invalid(format!(
            "correlation needs at least 2 researchers, got {}",
            outcomes.len()
        )));
    }
    let n = outcomes.len() as f64;
    let mean_r = outcomes.iter().map(|o| o.ratio).sum::<f64>() / n;
    let mean_p = outcomes.iter().map(|o| o.publications as f64).sum::<f64>() / n;
    let (mut srr, mut spp, mut srp) = (0.0, 0.0, 0.0);
    for o in outcomes {
        let dr = o.ratio - mean_r;
        let dp = o.publications as f64 - mean_p;
        srr += dr * dr;
        spp += dp * dp;
        srp += dr * dp;
    }
    if srr == 0.0 || spp == 0.0 {
        return Ok(None);
    }
    Ok(Some((srp / (srr * spp).sqrt()).clamp(-1.0, 1.0)))
}

pub fn cohort_stats(outcomes: &[ResearcherOutcome]) -> Result<CohortStats> {
    let corr = if outcomes.len() >= 2 {
        cohort_correlation(outcomes)?
    } else {
        None
    };
    Ok(CohortStats {
        aor: cohort_aor(outcomes)?,
        roa: cohort_roa(outcomes)?,
        corr,
        n: outcomes.len(),
    })
}

/// Seed of replication `index` under `master_seed`.
pub fn replication_seed(master_seed: u64, index: usize) -> u64 {
    derive_seed(master_seed, &[index as u64])
}

fn simulate_replication(
    config: &ExperimentConfig,
    zeta: &TruncatedZeta,
    index: usize,
) -> CohortStats {
    let mut rng = stream(replication_seed(config.master_seed, index));
    let outcomes: Vec<ResearcherOutcome> = (0..config.n_researchers)
        .map(|_| simulate_researcher(zeta, &config.citation_law, &mut rng))
        .collect();
    cohort_stats(&outcomes).expect("cohort is nonempty")
}

/// Runs `m_replications` independent cohorts.
///
/// Replication `j` draws from its own stream seeded by
/// `derive_seed(master_seed, [j])`, so the result does not depend on how the
/// work is scheduled across threads.
pub fn run_replications(config: &ExperimentConfig) -> Result<ReplicationSet> {
    config.validate()?;
    let zeta = TruncatedZeta::new(config.gamma, config.k_max)?;

    #[cfg(feature = "parallel")]
    let stats = {
        use rayon::prelude::*;
        (0..config.m_replications)
            .into_par_iter()
            .map(|j| simulate_replication(config, &zeta, j))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let stats = (0..config.m_replications)
        .map(|j| simulate_replication(config, &zeta, j))
        .collect();

    Ok(ReplicationSet {
        config: config.clone(),
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use approx::assert_abs_diff_eq;

    fn out(p: u64, c: u64) -> ResearcherOutcome {
        ResearcherOutcome::new(p, c).unwrap()
    }

    #[test]
    fn aor_and_roa_differ_on_unequal_cohort() {
        let cohort = [out(1, 10), out(3, 0)];
        assert_eq!(cohort_aor(&cohort).unwrap(), 5.0);
        assert_eq!(cohort_roa(&cohort).unwrap(), 2.5);
    }

    #[test]
    fn equal_publications_give_equal_aor_roa() {
        let cohort = [out(2, 3), out(2, 7), out(2, 11)];
        assert_eq!(cohort_aor(&cohort).unwrap(), cohort_roa(&cohort).unwrap());
        let same = [out(4, 8); 5];
        assert_eq!(cohort_aor(&same).unwrap(), 2.0);
    }

    #[test]
    fn empty_cohort_errors() {
        assert!(cohort_aor(&[]).is_err());
        assert!(cohort_roa(&[]).is_err());
        assert!(cohort_correlation(&[out(1, 1)]).is_err());
    }

    #[test]
    fn correlation_edge_cases() {
        assert_eq!(cohort_correlation(&[out(1, 2), out(3, 6)]).unwrap(), None);
        let linear = [out(1, 1), out(2, 4), out(3, 9), out(5, 25)];
        assert_abs_diff_eq!(cohort_correlation(&linear).unwrap().unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn point_mass_citations_fix_ratio() {
        let zeta = TruncatedZeta::new(3.0, 5000).unwrap();
        let law = EmpiricalDiscrete::point_mass(3);
        let mut rng = stream(5);
        let cohort: Vec<_> = (0..100_000)
            .map(|_| simulate_researcher(&zeta, &law, &mut rng))
            .collect();
        assert!(cohort.iter().all(|o| o.ratio == 3.0));
        assert_eq!(cohort_aor(&cohort).unwrap(), 3.0);
    }

    #[test]
    fn single_point_zeta_gives_one_publication() {
        let zeta = TruncatedZeta::new(2.0, 1).unwrap();
        let law = EmpiricalDiscrete::from_counts(&[(0, 3), (9, 1)]).unwrap();
        let mut rng = stream(9);
        for _ in 0..1000 {
            assert_eq!(simulate_researcher(&zeta, &law, &mut rng).publications, 1);
        }
    }

    #[test]
    fn tiny_deterministic_run() {
        let config = ExperimentConfig {
            n_researchers: 1,
            gamma: 3.0,
            k_max: 1,
            m_replications: 1,
            master_seed: 0,
            citation_law: Arc::new(EmpiricalDiscrete::point_mass(4)),
        };
        let set = run_replications(&config).unwrap();
        assert_eq!(
            set.stats,
            vec![CohortStats { aor: 4.0, roa: 4.0, corr: None, n: 1 }]
        );
    }

    #[test]
    fn invalid_config() {
        let mut config = ExperimentConfig {
            n_researchers: 0,
            gamma: 3.0,
            k_max: 10,
            m_replications: 1,
            master_seed: 0,
            citation_law: Arc::new(EmpiricalDiscrete::point_mass(1)),
        };
        assert!(run_replications(&config).is_err());
        config.n_researchers = 2;
        config.gamma = 0.9;
        assert!(run_replications(&config).is_err());
        config.gamma = 3.0;
        config.m_replications = 0;
        assert!(run_replications(&config).is_err());
    }
}
