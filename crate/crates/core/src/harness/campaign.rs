//! Verification campaigns: run seeded trials, evaluate every bound and collect the
//! results into a deterministic report.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::fixtures;
use super::generate::{gen_pair, gen_pencil, random_span_relation, trial_rng};
use super::io::{to_value, PencilFile, RankOneFile, RelationFile};
use crate::chains::{shifted, SpectralPoint};
use crate::fieldkit::{FieldTag, Subspace};
use crate::pencil::{pencil_bound_report, Pencil, RankOnePencil};
use crate::perturb::{check_bounds, decompose_path, perturbation_order, s_n, s_n_oracle, Verdict};
use crate::relation::LinearRelation;
use crate::{Error, Result};

/// Largest dimension for ℚ and ℚ(i) campaigns.
pub const MAX_DIM: usize = 8;
/// Largest dimension for the enumeration oracle.
pub const MAX_ORACLE_DIM: usize = 6;
/// Pair counts up to this are enumerated exhaustively by the oracle scenario.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    #[serde(rename = "relation-1dim")]
    RelationOneDim,
    #[serde(rename = "relation-pdim")]
    RelationMultiDim,
    #[serde(rename = "pencil-rankone")]
    PencilRankOne,
    #[serde(rename = "s_n-oracle")]
    DefectOracle,
    #[serde(rename = "fixtures")]
    Fixtures,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::RelationOneDim,
        Scenario::RelationMultiDim,
        Scenario::PencilRankOne,
        Scenario::DefectOracle,
        Scenario::Fixtures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::RelationOneDim => "relation-1dim",
            Scenario::RelationMultiDim => "relation-pdim",
            Scenario::PencilRankOne => "pencil-rankone",
            Scenario::DefectOracle => "s_n-oracle",
            Scenario::Fixtures => "fixtures",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown scenario {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub scenario: Scenario,
    pub field: FieldTag,
    pub d_min: usize,
    pub d_max: usize,
    pub trials: u64,
    pub seed: u64,
    /// Highest level checked; defaults to `2d` (3 for the oracle scenario).
    pub nmax: Option<usize>,
    /// Perturbation order for relation-pdim.
    pub p: usize,
}

impl CampaignConfig {
    pub fn new(scenario: Scenario, field: FieldTag, d: usize, trials: u64, seed: u64) -> Self {
        CampaignConfig { scenario, field, d_min: d, d_max: d, trials, seed, nmax: None, p: 1 }
    }

    pub fn with_dims(mut self, d_min: usize, d_max: usize) -> Self {
        (self.d_min, self.d_max) = (d_min, d_max);
        self
    }

    pub fn with_p(mut self, p: usize) -> Self {
        self.p = p;
        self
    }

    pub fn with_nmax(mut self, nmax: usize) -> Self {
        self.nmax = Some(nmax);
        self
    }

    /// Perturbation order drawn by the relation generator.
    pub fn order(&self) -> usize {
        match self.scenario {
            Scenario::RelationOneDim => 1,
            _ => self.p,
        }
    }

    pub fn nmax_for(&self, d: usize) -> usize {
        self.nmax.unwrap_or(match self.scenario {
            Scenario::DefectOracle => 3,
            _ => 2 * d,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Precondition("trials must be at least 1".into()));
        }
        if self.d_min == 0 || self.d_min > self.d_max {
            return Err(Error::Precondition(format!("bad dimension range {}..={}", self.d_min, self.d_max)));
        }
        if let FieldTag::Gf(p) = self.field {
            FieldTag::gf(p)?;
        }
        if self.d_max > MAX_DIM {
            return Err(Error::Infeasible(format!("d = {} exceeds {MAX_DIM}", self.d_max)));
        }
        if self.scenario == Scenario::DefectOracle {
            match self.field {
                FieldTag::Gf(p) if p <= crate::perturb::ORACLE_MAX_PRIME => {}
                f => return Err(Error::Infeasible(format!("the enumeration oracle needs GF(2) or GF(3), got {f}"))),
            }
            if self.d_max > MAX_ORACLE_DIM {
                return Err(Error::Infeasible(format!("d = {} exceeds {MAX_ORACLE_DIM}", self.d_max)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: u64,
    pub d: usize,
    pub kind: String,
    pub checks: usize,
    /// Checks whose value sits on a nonzero bound.
    pub tight: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub instance: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: CampaignConfig,
    pub instances: u64,
    pub checks: u64,
    pub trials: Vec<TrialSummary>,
    pub violations: Vec<Violation>,
    /// Per check, how often each `value in [lower, upper]` occurred.
    pub histograms: BTreeMap<String, BTreeMap<String, u64>>,
    /// Excluded from determinism comparisons.
    pub wall_time_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// The report as JSON without the wall-time field.
    pub fn deterministic_json(&self) -> Value {
        let mut v = to_value(self);
        v.as_object_mut().expect("struct").remove("wall_time_ms");
        v
    }
}

/// Verdicts of one trial, with the spectral point when there is one.
struct Outcome {
    d: usize,
    kind: String,
    verdicts: Vec<(Option<String>, Verdict)>,
    instance: Value,
}

fn plain(verdicts: impl IntoIterator<Item = Verdict>) -> Vec<(Option<String>, Verdict)> {
    verdicts.into_iter().map(|v| (None, v)).collect()
}

fn flag(check: &str, n: usize, holds: bool) -> Verdict {
    Verdict::new(check, n, 1, 1, holds as i64)
}

pub fn run_campaign(cfg: &CampaignConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let outcomes = match cfg.scenario {
        Scenario::RelationOneDim | Scenario::RelationMultiDim => {
            parallel((0..cfg.trials).collect(), |&t| relation_trial(cfg, t))?
        }
        Scenario::PencilRankOne => parallel((0..cfg.trials).collect(), |&t| pencil_trial(cfg, t))?,
        Scenario::DefectOracle => oracle_campaign(cfg)?,
        Scenario::Fixtures => fixture_suite()?,
    };

    let mut report = Report {
        config: cfg.clone(),
        instances: outcomes.len() as u64,
        checks: 0,
        trials: Vec::with_capacity(outcomes.len()),
        violations: Vec::new(),
        histograms: BTreeMap::new(),
        wall_time_ms: 0,
    };
    for (trial, o) in outcomes.into_iter().enumerate() {
        let trial = trial as u64;
        let mut summary =
            TrialSummary { trial, d: o.d, kind: o.kind, checks: o.verdicts.len(), tight: 0, violations: 0 };
        for (at, v) in o.verdicts {
            let key = format!("{} in [{}, {}]", v.value, v.lower, v.upper);
            *report.histograms.entry(v.check.clone()).or_default().entry(key).or_default() += 1;
            if (v.value == v.upper && v.upper != 0) || (v.value == v.lower && v.lower != 0) {
                summary.tight += 1;
            }
            if !v.pass {
                summary.violations += 1;
                report.violations.push(Violation { trial, at, verdict: v, instance: o.instance.clone() });
            }
        }
        report.checks += summary.checks as u64;
        report.trials.push(summary);
    }
    report.wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Runs `job` over `jobs` in parallel and returns the outcomes in job order.
fn parallel<J: Sync>(jobs: Vec<J>, job: impl Fn(&J) -> Result<Outcome> + Sync + Send) -> Result<Vec<Outcome>> {
    jobs.par_iter().map(job).collect()
}

fn relation_trial(cfg: &CampaignConfig, trial: u64) -> Result<Outcome> {
    let (a, b) = gen_pair(cfg, trial);
    let d = a.d();
    let nmax = cfg.nmax_for(d);
    let report = check_bounds(&a, &b, nmax)?;
    let p = cfg.order() as i64;
    let mut verdicts = report.verdicts.clone();
    verdicts.push(Verdict::new("generator_order", 0, 0, p, report.order as i64));
    let path = decompose_path(&a, &b)?;
    verdicts.push(Verdict::new("path_length", 0, 0, p, path.len() as i64 - 1));
    for (k, w) in path.windows(2).enumerate() {
        verdicts.push(Verdict::new("path_step_order", k + 1, 0, 1, perturbation_order(&w[0], &w[1])? as i64));
    }
    let nesting = match report.nested {
        _ if report.order == 0 => "equal",
        Some(_) => "nested",
        None => "crossing",
    };
    let singular = match (report.singular_a, report.singular_b) {
        (false, false) => "",
        _ => "+singular",
    };
    Ok(Outcome {
        d,
        kind: format!("{nesting}{singular}"),
        verdicts: plain(verdicts),
        instance: json!({
            "a": to_value(&RelationFile::from_relation(&a)),
            "b": to_value(&RelationFile::from_relation(&b)),
            "nmax": nmax,
        }),
    })
}

/// Candidate points of both pencils, infinity first.
fn points_of(p: &Pencil, after: &Pencil) -> Result<Vec<SpectralPoint>> {
    let mut out: Vec<SpectralPoint> = Vec::new();
    for x in p.eigen_candidates()?.into_iter().chain(after.eigen_candidates()?) {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

/// `𝓛_λ^l` from the chain equations against `N((E^{-1}F − λ)^l)`, `l ≤ lmax`, and the
/// Wong spaces against `N((F^{-1}E)^l)`.
pub fn bridge_verdicts(p: &Pencil, points: &[SpectralPoint], lmax: usize) -> Vec<(Option<String>, Verdict)> {
    let mut out = Vec::new();
    let rel = p.to_relation();
    for at in points {
        let kernels = shifted(&rel, at).power_spaces(lmax).ker;
        let chains = p.chain_spaces(at, lmax);
        for l in 0..=lmax {
            out.push((Some(at.to_string()), flag("bridge", l, chains[l] == kernels[l])));
        }
    }
    let dual = p.dual().to_relation().power_spaces(lmax).ker;
    for (l, w) in p.wong(lmax).iter().enumerate() {
        out.push((Some("wong".into()), flag("wong_identity", l, *w == dual[l])));
    }
    out
}

fn pencil_instance(p: &Pencil, q: &RankOnePencil) -> Value {
    json!({
        "pencil": to_value(&PencilFile::from_pencil(p)),
        "rank_one": to_value(&RankOneFile::from_rank_one(p.field(), q)),
    })
}

fn pencil_trial(cfg: &CampaignConfig, trial: u64) -> Result<Outcome> {
    let (p, q, kind) = gen_pencil(cfg, trial);
    let d = p.d();
    let nmax = cfg.nmax_for(d);
    let after = p.apply_perturbation(&q)?;
    let report = pencil_bound_report(&p, &q, &[], nmax)?;
    let mut verdicts: Vec<(Option<String>, Verdict)> = report
        .verdicts
        .iter()
        .map(|v| (Some(v.at.clone()).filter(|a| a != "-"), v.verdict.clone()))
        .collect();
    verdicts.extend(bridge_verdicts(&p, &points_of(&p, &after)?, d));
    let reg = |r: bool| if r { "regular" } else { "singular" };
    let incl = if report.inclusion { "+inclusion" } else { "" };
    Ok(Outcome {
        d,
        kind: format!(
            "{}: {}->{}{incl}",
            to_value(&kind).as_str().expect("unit variant"),
            reg(report.regular_before),
            reg(report.regular_after)
        ),
        verdicts,
        instance: pencil_instance(&p, &q),
    })
}

enum OracleJob {
    Exhaustive { d: usize, i: usize, j: usize },
    Sampled { d: usize, trial: u64 },
}

fn oracle_campaign(cfg: &CampaignConfig) -> Result<Vec<Outcome>> {
    let field = cfg.field;
    let mut all: BTreeMap<usize, Vec<LinearRelation>> = BTreeMap::new();
    let mut jobs = Vec::new();
    let mut sampled = 0u64;
    for d in cfg.d_min..=cfg.d_max {
        let count = subspace_count(field, 2 * d);
        if count.is_some_and(|c| c * c <= EXHAUSTIVE_PAIR_LIMIT) {
            let spaces: Vec<LinearRelation> = Subspace::enumerate_all(field, 2 * d)?
                .into_iter()
                .map(LinearRelation::new)
                .collect::<Result<_>>()?;
            let m = spaces.len();
            all.insert(d, spaces);
            jobs.extend((0..m * m).map(|k| OracleJob::Exhaustive { d, i: k / m, j: k % m }));
        } else {
            jobs.extend((0..cfg.trials).map(|_| {
                sampled += 1;
                OracleJob::Sampled { d, trial: sampled - 1 }
            }));
        }
    }
    parallel(jobs, |job| {
        let (d, a, b, kind) = match job {
            OracleJob::Exhaustive { d, i, j } => (*d, all[d][*i].clone(), all[d][*j].clone(), "exhaustive"),
            // alternate independent pairs with one-dimensional perturbations of a shared core
            OracleJob::Sampled { d, trial } if trial % 2 == 0 => {
                let mut rng = trial_rng(cfg.seed, *trial);
                let a = random_span_relation(field, *d, rng.random_range(0..=2 * d), &mut rng);
                let b = random_span_relation(field, *d, rng.random_range(0..=2 * d), &mut rng);
                (*d, a, b, "sampled")
            }
            OracleJob::Sampled { d, trial } => {
                let one_dim = CampaignConfig::new(Scenario::RelationOneDim, field, *d, 1, cfg.seed);
                let (a, b) = gen_pair(&one_dim, *trial);
                (*d, a, b, "sampled-1dim")
            }
        };
        let mut verdicts = Vec::new();
        let mut skipped = false;
        for n in 0..=cfg.nmax_for(d) {
            for (check, x, y) in [("s_n_oracle", &a, &b), ("s_n_oracle_swapped", &b, &a)] {
                match s_n_oracle(x, y, n) {
                    Ok(o) => verdicts.push(Verdict::new(check, n, o as i64, o as i64, s_n(x, y, n)? as i64)),
                    Err(Error::Infeasible(_)) => skipped = true,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(Outcome {
            d,
            kind: if skipped { format!("{kind}+skipped") } else { kind.to_string() },
            verdicts: plain(verdicts),
            instance: json!({
                "a": to_value(&RelationFile::from_relation(&a)),
                "b": to_value(&RelationFile::from_relation(&b)),
            }),
        })
    })
}

/// Number of subspaces of `F^n` for a finite field, if it fits in `usize`.
pub fn subspace_count(field: FieldTag, n: usize) -> Option<usize> {
    let FieldTag::Gf(p) = field else { return None };
    let q = p as u128;
    let mut total: u128 = 0;
    for k in 0..=n {
        // Gaussian binomial [n, k]_q
        let (mut num, mut den) = (1u128, 1u128);
        for i in 0..k {
            num = num.checked_mul(q.checked_pow((n - i) as u32)? - 1)?;
            den = den.checked_mul(q.checked_pow((i + 1) as u32)? - 1)?;
        }
        total = total.checked_add(num / den)?;
    }
    usize::try_from(total).ok()
}

/// Exact regression tables for the named fixtures.
fn fixture_suite() -> Result<Vec<Outcome>> {
    fixtures::regressions()
        .into_iter()
        .map(|r| {
            let (name, d, verdicts) = r?;
            Ok(Outcome { d, kind: name, verdicts, instance: Value::Null })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_counts() {
        assert_eq!(subspace_count(FieldTag::Gf(2), 2), Some(5));
        assert_eq!(subspace_count(FieldTag::Gf(2), 4), Some(67));
        assert_eq!(subspace_count(FieldTag::Gf(3), 4), Some(212));
        assert_eq!(subspace_count(FieldTag::Q, 2), None);
        for (p, n) in [(2, 3), (3, 2), (2, 4)] {
            let f = FieldTag::Gf(p);
            assert_eq!(subspace_count(f, n).unwrap(), Subspace::enumerate_all(f, n).unwrap().len());
        }
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.name().parse::<Scenario>().unwrap(), s);
            assert_eq!(to_value(&s), Value::String(s.name().into()));
        }
        assert!("bogus".parse::<Scenario>().is_err());
    }

    #[test]
    fn config_validation() {
        let ok = CampaignConfig::new(Scenario::RelationOneDim, FieldTag::Q, 3, 10, 1);
        assert!(ok.validate().is_ok());
        let mut bad = ok.clone();
        bad.trials = 0;
        assert!(matches!(bad.validate(), Err(Error::Precondition(_))));
        assert!(matches!(ok.clone().with_dims(1, 9).validate(), Err(Error::Infeasible(_))));
        let oracle = CampaignConfig::new(Scenario::DefectOracle, FieldTag::Gf(5), 2, 10, 1);
        assert!(matches!(oracle.validate(), Err(Error::Infeasible(_))));
    }

    #[test]
    fn fixture_regressions_pass() {
        let r = run_campaign(&CampaignConfig::new(Scenario::Fixtures, FieldTag::Q, 2, 1, 0)).unwrap();
        assert!(r.passed(), "{:#?}", r.violations);
        assert_eq!(r.instances, 8);
    }

    #[test]
    fn small_campaigns_are_clean_and_repeatable() {
        for cfg in [
            CampaignConfig::new(Scenario::RelationOneDim, FieldTag::Gf(3), 3, 20, 7),
            CampaignConfig::new(Scenario::RelationMultiDim, FieldTag::Q, 2, 10, 7).with_p(2),
            CampaignConfig::new(Scenario::PencilRankOne, FieldTag::Q, 3, 10, 7),
            CampaignConfig::new(Scenario::DefectOracle, FieldTag::Gf(2), 1, 5, 7),
        ] {
            let r = run_campaign(&cfg).unwrap();
            assert!(r.passed(), "{:?}", r.violations);
            assert_eq!(r.deterministic_json(), run_campaign(&cfg).unwrap().deterministic_json());
        }
    }
}
