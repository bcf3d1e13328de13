//! The JSON report. Polynomials and operators are grammar strings; every
//! dimension is an integer.

use std::collections::BTreeMap;

use dfol::dmod::{
    CharVariety, DIrrReport, Evidence, HypothesisReport, KoszulReport, TruncatedCohomologyReport, Witness,
};
use dfol::foliation::{IntegrabilityReport, LieClosureReport, OneFormModule, RankProfile, Stratum};
use serde::{Deserialize, Serialize};

use crate::input::InputFile;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub truncation: u32,
    pub lookahead: Option<u32>,
    pub koszul_cap: u32,
    pub fi_cap: u32,
    pub window: usize,
    pub phases: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieClosure {
    pub closed: bool,
    pub failing_pair: Option<[usize; 2]>,
    pub bracket: Option<String>,
}

impl From<&LieClosureReport> for LieClosure {
    fn from(r: &LieClosureReport) -> Self {
        LieClosure {
            closed: r.closed,
            failing_pair: r.failing_pair.map(|(i, j)| [i, j]),
            bracket: r.bracket.as_ref().map(ToString::to_string),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orthogonal {
    /// Each generator as its list of `dx_i` coefficients.
    pub generators: Vec<Vec<String>>,
    pub forms: Vec<String>,
    pub double_orthogonal: bool,
}

impl Orthogonal {
    pub fn new(m: &OneFormModule, double_orthogonal: bool) -> Self {
        Orthogonal {
            generators: m.generators.iter().map(|g| g.entries.iter().map(ToString::to_string).collect()).collect(),
            forms: (0..m.generators.len()).map(|k| m.form_string(k)).collect(),
            double_orthogonal,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Integrability {
    /// `pairings[k][i][j] = d(omega_k)(v_i, v_j)`
    pub pairings: Vec<Vec<Vec<String>>>,
    pub all_zero: bool,
}

impl From<&IntegrabilityReport> for Integrability {
    fn from(r: &IntegrabilityReport) -> Self {
        Integrability {
            pairings: r
                .pairings
                .iter()
                .map(|t| t.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect())
                .collect(),
            all_zero: r.all_zero,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub rk: usize,
    pub cork: usize,
    pub irr: usize,
}

impl From<&RankProfile> for Profile {
    fn from(p: &RankProfile) -> Self {
        Profile { rk: p.rk, cork: p.cork, irr: p.irr }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub j: usize,
    pub vanishing_ideal: Vec<String>,
    pub nonvanishing_ideal: Vec<String>,
    pub closure_dimension: i64,
    pub nonempty: bool,
}

impl From<&Stratum> for StratumReport {
    fn from(s: &Stratum) -> Self {
        StratumReport {
            j: s.j,
            vanishing_ideal: s.vanishing_ideal.iter().map(ToString::to_string).collect(),
            nonvanishing_ideal: s.nonvanishing_ideal.iter().map(ToString::to_string).collect(),
            closure_dimension: s.closure_dimension,
            nonempty: s.nonempty,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub pairwise_commuting: bool,
    pub failing_pair: Option<[usize; 2]>,
    pub commutator: Option<String>,
    pub symbols: Vec<String>,
    pub symbol_ideal_dimension: i64,
    pub symbols_regular_sequence: bool,
    pub passed: bool,
}

impl From<&HypothesisReport> for Hypotheses {
    fn from(h: &HypothesisReport) -> Self {
        Hypotheses {
            pairwise_commuting: h.pairwise_commuting,
            failing_pair: h.failing_pair.map(|(i, j)| [i, j]),
            commutator: h.commutator.as_ref().map(ToString::to_string),
            symbols: h.symbols.iter().map(ToString::to_string).collect(),
            symbol_ideal_dimension: h.symbol_ideal_dimension,
            symbols_regular_sequence: h.symbols_regular_sequence,
            passed: h.passed(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicVariety {
    pub generators: Vec<String>,
    pub dimension: i64,
    pub codimension: i64,
}

impl From<&CharVariety> for CharacteristicVariety {
    fn from(c: &CharVariety) -> Self {
        CharacteristicVariety {
            generators: c.generators.iter().map(ToString::to_string).collect(),
            dimension: c.dimension,
            codimension: c.codimension,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Koszul {
    pub degree_cap: u32,
    pub dims: Vec<Vec<usize>>,
    pub exact_below_top: bool,
}

impl From<&KoszulReport> for Koszul {
    fn from(k: &KoszulReport) -> Self {
        Koszul { degree_cap: k.degree_cap, dims: k.dims.clone(), exact_below_top: k.exact_below_top }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedCohomology {
    pub levels: Vec<u32>,
    pub lookahead: u32,
    pub window: usize,
    pub dims: Vec<Vec<usize>>,
    pub stabilized: Vec<bool>,
    pub stabilized_nonzero: Vec<bool>,
    pub constant_tail: Vec<bool>,
    pub dd_zero: Vec<bool>,
}

impl From<&TruncatedCohomologyReport> for TruncatedCohomology {
    fn from(t: &TruncatedCohomologyReport) -> Self {
        TruncatedCohomology {
            levels: t.levels.clone(),
            lookahead: t.lookahead,
            window: t.window,
            dims: t.dims.clone(),
            stabilized: t.stabilized.clone(),
            stabilized_nonzero: t.stabilized_nonzero.clone(),
            constant_tail: t.constant_tail.clone(),
            dd_zero: t.dd_zero.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessStatus {
    Found,
    ExistsNoRationalPoint,
    Absent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub status: WitnessStatus,
    pub point: Option<Vec<String>>,
}

impl From<&Witness> for WitnessReport {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::Found(p) => WitnessReport {
                status: WitnessStatus::Found,
                point: Some(p.iter().map(ToString::to_string).collect()),
            },
            Witness::ExistsNoRationalPoint => WitnessReport { status: WitnessStatus::ExistsNoRationalPoint, point: None },
            Witness::Absent => WitnessReport { status: WitnessStatus::Absent, point: None },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DIrrEntryReport {
    pub k: usize,
    /// `identity_class`, `common_zero` or `truncation`.
    pub evidence: String,
    pub dims: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DIrr {
    pub sequence: Vec<DIrrEntryReport>,
    pub d_irr: usize,
    pub geometric_irr: usize,
    pub theorem1_consistent: bool,
}

impl From<&DIrrReport> for DIrr {
    fn from(d: &DIrrReport) -> Self {
        let sequence = d
            .sequence
            .iter()
            .map(|e| {
                let (evidence, dims) = match &e.evidence {
                    Evidence::IdentityClass => ("identity_class", None),
                    Evidence::CommonZero(_) => ("common_zero", None),
                    Evidence::Truncation(t) => ("truncation", Some(t.clone())),
                };
                DIrrEntryReport { k: e.k, evidence: evidence.into(), dims }
            })
            .collect();
        DIrr { sequence, d_irr: d.d_irr, geometric_irr: d.geometric_irr, theorem1_consistent: d.theorem1_consistent }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstIntegrals {
    pub max_degree: u32,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub phase: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: Option<InputFile>,
    /// The generators as parsed, in normal form.
    pub generators: Vec<String>,
    pub config: Option<ConfigEcho>,
    pub lie_closure: Option<LieClosure>,
    pub orthogonal: Option<Orthogonal>,
    pub integrability: Option<Integrability>,
    pub rank_profile: Option<Profile>,
    pub strata: Option<Vec<StratumReport>>,
    pub hypotheses: Option<Hypotheses>,
    pub characteristic_variety: Option<CharacteristicVariety>,
    pub koszul: Option<Koszul>,
    pub truncated_cohomology: Option<TruncatedCohomology>,
    pub witness: Option<WitnessReport>,
    pub d_irr: Option<DIrr>,
    pub first_integrals: Option<FirstIntegrals>,
    pub failures: Vec<Failure>,
    /// Microseconds per phase; not part of the deterministic content.
    pub timing: BTreeMap<String, u64>,
}

impl AnalysisReport {
    /// The report with timings removed, for comparisons between runs.
    pub fn without_timing(&self) -> AnalysisReport {
        AnalysisReport { timing: BTreeMap::new(), ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// A few lines for the terminal.
    pub fn summary(&self) -> String {
        let mut out = Vec::new();
        out.push(format!("generators: {}", self.generators.join(", ")));
        if let Some(l) = &self.lie_closure {
            match l.failing_pair {
                None => out.push("lie closure: closed".into()),
                Some([i, j]) => out.push(format!(
                    "lie closure: not closed, [v{i}, v{j}] = {}",
                    l.bracket.as_deref().unwrap_or("?")
                )),
            }
        }
        if let Some(p) = &self.rank_profile {
            out.push(format!("rk {}  cork {}  irr {}", p.rk, p.cork, p.irr));
        }
        if let Some(h) = &self.hypotheses {
            out.push(format!(
                "hypotheses: commuting {}  regular symbols {}",
                h.pairwise_commuting, h.symbols_regular_sequence
            ));
        }
        if let Some(t) = &self.truncated_cohomology {
            for (k, row) in t.dims.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                out.push(format!("H^{k} by level: {}", cells.join(" ")));
            }
        }
        if let Some(w) = &self.witness {
            match (&w.status, &w.point) {
                (WitnessStatus::Found, Some(p)) => out.push(format!("witness: ({})", p.join(", "))),
                (WitnessStatus::ExistsNoRationalPoint, _) => out.push("witness: exists, no rational point found".into()),
                _ => out.push("witness: none".into()),
            }
        }
        if let Some(d) = &self.d_irr {
            let seq: Vec<String> = d.sequence.iter().map(|e| e.k.to_string()).collect();
            out.push(format!(
                "d_irr {} (sequence {})  irr {}  consistent {}",
                d.d_irr,
                seq.join(","),
                d.geometric_irr,
                d.theorem1_consistent
            ));
        }
        for f in &self.failures {
            out.push(format!("{} failed: {}", f.phase, f.message));
        }
        out.join("\n")
    }
}
