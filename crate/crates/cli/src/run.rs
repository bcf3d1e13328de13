use std::time::Instant;

use dfol::dmod::{
    assemble_d_irregularity, characteristic_variety, check_hypotheses, first_integrals, koszul_graded_exactness,
    top_cohomology_witness, truncated_endo_cohomology, HypothesisReport, TruncatedCohomologyReport,
    TruncationConfig, Witness,
};
use dfol::foliation::{
    check_lie_subalgebra, double_orthogonal_check, dual_integrability_check, orthogonal_complement, rank_profile,
    strata, FoliationPresentation, LieClosureReport, RankProfile,
};

use crate::input::InputFile;
use crate::report::{AnalysisReport, ConfigEcho, Failure, FirstIntegrals, Orthogonal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Phase {
    LieClosure,
    Orthogonal,
    Integrability,
    RankProfile,
    Strata,
    Hypotheses,
    CharacteristicVariety,
    Koszul,
    TruncatedCohomology,
    Witness,
    DIrr,
    FirstIntegrals,
}

impl Phase {
    pub const ALL: [Phase; 12] = [
        Phase::LieClosure,
        Phase::Orthogonal,
        Phase::Integrability,
        Phase::RankProfile,
        Phase::Strata,
        Phase::Hypotheses,
        Phase::CharacteristicVariety,
        Phase::Koszul,
        Phase::TruncatedCohomology,
        Phase::Witness,
        Phase::DIrr,
        Phase::FirstIntegrals,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Phase::LieClosure => "lie_closure",
            Phase::Orthogonal => "orthogonal",
            Phase::Integrability => "integrability",
            Phase::RankProfile => "rank_profile",
            Phase::Strata => "strata",
            Phase::Hypotheses => "hypotheses",
            Phase::CharacteristicVariety => "characteristic_variety",
            Phase::Koszul => "koszul",
            Phase::TruncatedCohomology => "truncated_cohomology",
            Phase::Witness => "witness",
            Phase::DIrr => "d_irr",
            Phase::FirstIntegrals => "first_integrals",
        }
    }

    fn needs_hypotheses(self) -> bool {
        matches!(self, Phase::CharacteristicVariety | Phase::Koszul | Phase::TruncatedCohomology | Phase::DIrr)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub truncation: u32,
    pub lookahead: Option<u32>,
    pub koszul_cap: u32,
    pub fi_cap: u32,
    pub window: usize,
    /// Empty means every phase.
    pub only: Vec<Phase>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { truncation: 6, lookahead: None, koszul_cap: 4, fi_cap: 3, window: 3, only: Vec::new() }
    }
}

impl AnalysisConfig {
    pub fn phases(&self) -> Vec<Phase> {
        if self.only.is_empty() {
            return Phase::ALL.to_vec();
        }
        let mut p = self.only.clone();
        p.sort();
        p.dedup();
        p
    }

    fn truncation(&self) -> TruncationConfig {
        TruncationConfig { m_max: self.truncation, lookahead: self.lookahead, window: self.window }
    }
}

/// Exit status of a finished analysis besides the report itself.
pub const EXIT_HYPOTHESES: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

struct Runner<'a> {
    f: &'a FoliationPresentation,
    report: AnalysisReport,
    exit: i32,
    lie: Option<LieClosureReport>,
    hyp: Option<HypothesisReport>,
    profile: Option<RankProfile>,
    cohomology: Option<TruncatedCohomologyReport>,
    witness: Option<Witness>,
}

impl Runner<'_> {
    fn fail(&mut self, phase: Phase, message: String, code: i32) {
        self.report.failures.push(Failure { phase: phase.name().into(), message });
        self.exit = self.exit.max(code);
    }

    fn timed<T>(&mut self, phase: Phase, work: impl FnOnce(&mut Self) -> dfol::Result<T>) -> Option<T> {
        let start = Instant::now();
        let out = work(self);
        let micros = start.elapsed().as_micros() as u64;
        *self.report.timing.entry(phase.name().into()).or_default() += micros;
        match out {
            Ok(v) => Some(v),
            Err(e) => {
                let code = match e {
                    dfol::Error::HypothesesNotVerified(_) => EXIT_HYPOTHESES,
                    dfol::Error::TruncationTooSmall { .. } => 2,
                    _ => EXIT_INTERNAL,
                };
                self.fail(phase, e.to_string(), code);
                None
            }
        }
    }

    fn lie(&mut self) -> Option<LieClosureReport> {
        if self.lie.is_none() {
            let f = self.f;
            self.lie = self.timed(Phase::LieClosure, |_| check_lie_subalgebra(f));
        }
        self.lie.clone()
    }

    fn hypotheses(&mut self) -> Option<HypothesisReport> {
        if self.hyp.is_none() {
            let f = self.f;
            self.hyp = self.timed(Phase::Hypotheses, |_| check_hypotheses(f));
        }
        self.hyp.clone()
    }

    fn profile(&mut self) -> Option<RankProfile> {
        if self.profile.is_none() {
            let f = self.f;
            self.profile = self.timed(Phase::RankProfile, |_| rank_profile(f));
        }
        self.profile
    }

    fn witness(&mut self) -> Option<Witness> {
        if self.witness.is_none() {
            let f = self.f;
            self.witness = self.timed(Phase::Witness, |_| top_cohomology_witness(f));
        }
        self.witness.clone()
    }

    fn cohomology(&mut self, config: &AnalysisConfig) -> Option<TruncatedCohomologyReport> {
        if self.cohomology.is_none() {
            let f = self.f;
            let t = config.truncation();
            self.cohomology = self.timed(Phase::TruncatedCohomology, |_| truncated_endo_cohomology(f, &t));
        }
        self.cohomology.clone()
    }
}

/// Runs the selected analyses. The exit code is 0, 3 when a requested
/// analysis needs hypotheses that fail, 2 for a truncation below the
/// generator degree, and 4 for an internal consistency failure.
pub fn analyze(input: Option<&InputFile>, f: &FoliationPresentation, config: &AnalysisConfig) -> (AnalysisReport, i32) {
    let phases = config.phases();
    let mut run = Runner {
        f,
        report: AnalysisReport {
            input: input.cloned(),
            generators: f.generators().iter().map(ToString::to_string).collect(),
            config: Some(ConfigEcho {
                truncation: config.truncation,
                lookahead: config.lookahead,
                koszul_cap: config.koszul_cap,
                fi_cap: config.fi_cap,
                window: config.window,
                phases: phases.iter().map(|p| p.name().to_string()).collect(),
            }),
            ..AnalysisReport::default()
        },
        exit: 0,
        lie: None,
        hyp: None,
        profile: None,
        cohomology: None,
        witness: None,
    };

    if phases.iter().any(|p| p.needs_hypotheses()) || phases.contains(&Phase::Hypotheses) {
        if let Some(h) = run.hypotheses() {
            run.report.hypotheses = Some((&h).into());
        }
    }
    let hypotheses_ok = run.hyp.as_ref().is_some_and(HypothesisReport::passed);

    for &phase in &phases {
        if phase.needs_hypotheses() && !hypotheses_ok {
            let reason = match &run.hyp {
                Some(h) if !h.pairwise_commuting => {
                    let (i, j) = h.failing_pair.expect("failing pair");
                    format!(
                        "hypotheses not verified: [v{i}, v{j}] = {}",
                        h.commutator.as_ref().expect("commutator")
                    )
                }
                Some(h) => format!(
                    "hypotheses not verified: symbols are not a regular sequence (dimension {})",
                    h.symbol_ideal_dimension
                ),
                None => "hypotheses could not be checked".to_string(),
            };
            run.fail(phase, reason, EXIT_HYPOTHESES);
            continue;
        }
        match phase {
            Phase::LieClosure => {
                if let Some(l) = run.lie() {
                    run.report.lie_closure = Some((&l).into());
                }
            }
            Phase::Orthogonal => {
                let out = run.timed(phase, |_| Ok((orthogonal_complement(f)?, double_orthogonal_check(f)?)));
                if let Some((m, dbl)) = out {
                    run.report.orthogonal = Some(Orthogonal::new(&m, dbl));
                }
            }
            Phase::Integrability => {
                if let Some(r) = run.timed(phase, |_| dual_integrability_check(f)) {
                    run.report.integrability = Some((&r).into());
                }
            }
            Phase::RankProfile => {
                if let Some(p) = run.profile() {
                    run.report.rank_profile = Some((&p).into());
                }
            }
            Phase::Strata => {
                if let Some(s) = run.timed(phase, |_| strata(f)) {
                    run.report.strata = Some(s.iter().map(Into::into).collect());
                }
            }
            Phase::Hypotheses => {}
            Phase::CharacteristicVariety => {
                if let Some(c) = run.timed(phase, |_| characteristic_variety(f)) {
                    run.report.characteristic_variety = Some((&c).into());
                }
            }
            Phase::Koszul => {
                let cap = config.koszul_cap;
                if let Some(k) = run.timed(phase, |_| koszul_graded_exactness(f, cap)) {
                    run.report.koszul = Some((&k).into());
                }
            }
            Phase::TruncatedCohomology => {
                if let Some(t) = run.cohomology(config) {
                    run.report.truncated_cohomology = Some((&t).into());
                }
            }
            Phase::Witness => {
                if let Some(w) = run.witness() {
                    run.report.witness = Some((&w).into());
                }
            }
            Phase::DIrr => {
                let (Some(t), Some(w), Some(p)) = (run.cohomology(config), run.witness(), run.profile()) else {
                    continue;
                };
                run.report.d_irr = Some((&assemble_d_irregularity(&t, &w, &p)).into());
            }
            Phase::FirstIntegrals => {
                let cap = config.fi_cap;
                if let Some(b) = run.timed(phase, |_| first_integrals(f, cap)) {
                    run.report.first_integrals =
                        Some(FirstIntegrals { max_degree: cap, basis: b.iter().map(ToString::to_string).collect() });
                }
            }
        }
    }
    (run.report, run.exit)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub lie_closed: bool,
    pub hypotheses_passed: bool,
    /// One line per failed check.
    pub messages: Vec<String>,
}

impl CheckOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.lie_closed && self.hypotheses_passed {
            0
        } else {
            EXIT_HYPOTHESES
        }
    }
}

/// Lie closure and hypothesis (2) only.
pub fn check(f: &FoliationPresentation) -> dfol::Result<CheckOutcome> {
    let lie = check_lie_subalgebra(f)?;
    let hyp = check_hypotheses(f)?;
    let mut messages = Vec::new();
    if let (Some((i, j)), Some(b)) = (lie.failing_pair, &lie.bracket) {
        messages.push(format!("not a Lie subalgebra: failing pair ({i}, {j}), [v{i}, v{j}] = {b}"));
    }
    if let (Some((i, j)), Some(c)) = (hyp.failing_pair, &hyp.commutator) {
        messages.push(format!("generators do not commute: failing pair ({i}, {j}), commutator {c}"));
    }
    if !hyp.symbols_regular_sequence {
        messages.push(format!(
            "symbols are not a regular sequence: dimension {} instead of {}",
            hyp.symbol_ideal_dimension,
            2 * f.nvars() - f.len()
        ));
    }
    Ok(CheckOutcome { lie_closed: lie.closed, hypotheses_passed: hyp.passed(), messages })
}
