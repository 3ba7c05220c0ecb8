//! End-to-end run: triality group, Moufang loop, filtration, `L_p(G)`,
//! induced triality, `H`, and every check along the way.

use std::path::Path;

use serde::Serialize;

use crate::config::{Caps, SweepPolicy};
use crate::error::{Error, Result};
use crate::graded_lie::{
    build_lp_algebra, check_lie_axioms, example_4_algebra, induce_triality, verify_restricted_axioms,
};
use crate::group_algebra::{check_filtration, FiltrationProfile};
use crate::groups::{check_hall_identity, is_power_of, FiniteGroup};
use crate::io::{read_input, Input};
use crate::malcev::{
    check_alpha_power, check_bridge_identities, check_engel_hypotheses, check_generation, check_lie_engel,
    check_malcev_identities, check_rho_commutation, check_series_properties, extract_h, series, SeriesKind,
    SeriesReport,
};
use crate::moufang::loop_exponent;
use crate::report::{CheckReport, Outcome, Report};
use crate::triality::{abelian_doubling, full_report, group_doubling, TrialityGroup};

/// Random homogeneous combinations drawn per degree in the operator checks.
pub const OPERATOR_SAMPLES: usize = 4;

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub input: String,
    pub p: u32,
    pub n: u32,
    pub group_order: usize,
    pub loop_order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loop_exponent: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filtration: Option<FiltrationProfile>,
    pub lie_dims: Vec<usize>,
    pub h_dims: Vec<usize>,
    pub h_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_nilpotency_class: Option<usize>,
    /// `p^dim H`, when it fits in 128 bits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_size: Option<u128>,
    pub series: Vec<SeriesReport>,
    pub report: Report,
}

impl PipelineReport {
    fn empty(input: &str, p: u32, n: u32) -> Self {
        PipelineReport {
            input: input.to_string(),
            p,
            n,
            group_order: 0,
            loop_order: 0,
            loop_exponent: None,
            filtration: None,
            lie_dims: Vec::new(),
            h_dims: Vec::new(),
            h_dim: 0,
            h_nilpotency_class: None,
            h_size: None,
            series: Vec::new(),
            report: Report::default(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.report.all_passed()
    }

    pub fn render(&self) -> String {
        let mut s = format!("input {} (p = {}, n = {})\n", self.input, self.p, self.n);
        if self.group_order > 0 {
            s.push_str(&format!("|G| = {}  |U| = {}", self.group_order, self.loop_order));
            if let Some(e) = self.loop_exponent {
                s.push_str(&format!("  exponent(U) = {e}"));
            }
            s.push('\n');
        }
        if let Some(f) = &self.filtration {
            s.push_str(&format!(
                "filtration orders {:?}, quotient dims {:?}\n",
                f.orders, f.quotient_dims
            ));
        }
        if !self.lie_dims.is_empty() || self.group_order > 0 {
            s.push_str(&format!("dim L_i {:?}  dim H_i {:?}\n", self.lie_dims, self.h_dims));
        }
        if let Some(c) = self.h_nilpotency_class {
            s.push_str(&format!("H nilpotent of class {c}\n"));
        }
        if let Some(h) = self.h_size {
            s.push_str(&format!("p^dim H = {h}, |U| = {}\n", self.loop_order));
        }
        for c in &self.report.checks {
            s.push_str(&format!("  {}\n", c.summary_line()));
        }
        s
    }
}

/// Turns the outcome of a check whose hypothesis does not hold into a skip
/// that still records what was computed.
fn informational(mut rep: Report, why: &str) -> Report {
    for c in rep.checks.iter_mut() {
        if c.outcome != Outcome::Skipped {
            c.reason = Some(format!("informational, {why}; computed outcome {}", c.outcome));
            c.outcome = Outcome::Skipped;
        }
    }
    rep
}

/// Full run on a certified triality p-group.
pub fn run_pipeline(t: &TrialityGroup, p: u32, n: u32, caps: &Caps, policy: &SweepPolicy) -> Result<PipelineReport> {
    let g = t.group();
    if !g.is_p_group(p) {
        return Err(Error::NotPGroup {
            p,
            reason: format!("{} has order {}", g.label(), g.order()),
        });
    }
    let mut out = PipelineReport::empty(t.label(), p, n);
    out.group_order = g.order();
    let q = (p as usize).pow(n);

    let (l, mut rep) = full_report(t, policy)?;
    rep.push(check_hall_identity(g, policy));
    out.loop_order = l.loop_.order();
    let exponent = loop_exponent(&l.loop_);
    let engel_ok = match &exponent {
        Ok(e) => {
            out.loop_exponent = Some(*e);
            (q as u64).is_multiple_of(*e)
        }
        Err(_) => false,
    };

    let lie = build_lp_algebra(g, p, caps)?;
    let src = lie.source().expect("group source").clone();
    rep.extend(check_filtration(g, &src.filtration));
    out.filtration = Some(src.filtration.profile());
    out.lie_dims = lie.degree_dims();
    rep.extend(check_lie_axioms(&lie));
    rep.extend(verify_restricted_axioms(&lie));

    let lt = induce_triality(t, p, caps)?;
    rep.extend(lt.verify());
    let h = match extract_h(&lt) {
        Ok(h) => {
            let mut c = CheckReport::new("malcev.h_closed", "H * H <= H");
            c.case();
            rep.push(c);
            h
        }
        Err(Error::NotClosed(w)) => {
            let mut c = CheckReport::new("malcev.h_closed", "H * H <= H");
            c.fail(|| w);
            rep.push(c);
            out.report = rep;
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.h_dims = h.degree_dims();
    out.h_dim = h.dim();
    rep.extend(check_malcev_identities(&h));
    rep.extend(check_bridge_identities(&lt, &h)?);
    rep.extend(check_rho_commutation(&lt));
    rep.extend(check_alpha_power(&lt, n, caps, OPERATOR_SAMPLES, policy.seed)?);

    let mut engel = check_lie_engel(&lt, &h, q, caps, OPERATOR_SAMPLES, policy.seed)?;
    engel.extend(check_engel_hypotheses(&h, q, caps, OPERATOR_SAMPLES, policy.seed)?);
    if !engel_ok {
        let why = match exponent {
            Ok(e) => format!("loop exponent {e} does not divide {q}"),
            Err(e) => e.to_string(),
        };
        engel = informational(engel, &why);
    }
    let hypotheses_hold = ["engel.nilpotent", "engel.symmetrized"]
        .iter()
        .all(|c| engel.outcome(c) == Some(Outcome::Pass));
    rep.extend(engel);

    let gens: Vec<Vec<u32>> = (0..h.dim())
        .filter(|&i| h.degrees().is_some_and(|d| d[i] == 1))
        .map(|i| h.unit(i))
        .collect();
    rep.push(check_generation(&lt, &h, &gens)?);

    let lower = series(&h, SeriesKind::LowerPower);
    out.h_nilpotency_class = lower.class;
    let stmt = "Engel hypotheses give a nilpotent H";
    if hypotheses_hold {
        let mut c = CheckReport::new("series.engel_nilpotent", stmt);
        c.expect(lower.reaches_zero, || format!("lower power dims {:?}", lower.dims));
        rep.push(c);
    } else {
        rep.push(CheckReport::skipped(
            "series.engel_nilpotent",
            stmt,
            "Engel hypotheses not both verified",
        ));
    }
    out.series = vec![
        lower,
        series(&h, SeriesKind::SolvableBracket),
        series(&h, SeriesKind::Derived),
    ];
    rep.extend(check_series_properties(&h));

    out.h_size = (p as u128).checked_pow(h.dim() as u32);
    let mut c = CheckReport::new("size.h_matches_u", "p^dim H = |U|");
    c.expect(out.h_size == Some(out.loop_order as u128), || {
        format!("p^{} vs |U| = {}", h.dim(), out.loop_order)
    });
    rep.push(c);
    out.report = rep;
    Ok(out)
}

/// Checks on the hand-built three-dimensional example; no group behind it.
pub fn run_example(p: u32, sigma_sign: i64, caps: &Caps) -> Result<PipelineReport> {
    let ex = example_4_algebra(p, sigma_sign)?;
    let mut out = PipelineReport::empty(&format!("example_4(p={p}, sigma_sign={sigma_sign})"), p, 1);
    let mut rep = ex.report.clone();
    rep.extend(check_lie_axioms(ex.triality.lie()));
    rep.extend(check_rho_commutation(&ex.triality));
    rep.extend(check_alpha_power(&ex.triality, 1, caps, 0, 0)?);
    match extract_h(&ex.triality) {
        Ok(h) => {
            let mut c = CheckReport::new("malcev.h_closed", "H * H <= H");
            c.case();
            rep.push(c);
            out.h_dim = h.dim();
            rep.extend(check_malcev_identities(&h));
            rep.extend(check_bridge_identities(&ex.triality, &h)?);
        }
        Err(Error::NotClosed(w)) => {
            let mut c = CheckReport::new("malcev.h_closed", "H * H <= H");
            c.fail(|| w);
            rep.push(c);
        }
        Err(e) => return Err(e),
    }
    out.lie_dims = vec![3];
    out.report = rep;
    Ok(out)
}

/// A named input with the parameters the pipeline runs it at.
#[derive(Clone, Debug)]
pub enum FleetInput {
    Group {
        name: String,
        triality: Box<TrialityGroup>,
        p: u32,
        n: u32,
    },
    Example {
        name: String,
        p: u32,
        sigma_sign: i64,
    },
}

impl FleetInput {
    pub fn name(&self) -> &str {
        match self {
            FleetInput::Group { name, .. } | FleetInput::Example { name, .. } => name,
        }
    }

    pub fn run(&self, caps: &Caps, policy: &SweepPolicy) -> Result<PipelineReport> {
        match self {
            FleetInput::Group { triality, p, n, .. } => run_pipeline(triality, *p, *n, caps, policy),
            FleetInput::Example { p, sigma_sign, .. } => run_example(*p, *sigma_sign, caps),
        }
    }

    /// Checks that are supposed to fail on this input.
    pub fn expected_failures(&self) -> Vec<&'static str> {
        match self {
            FleetInput::Group { .. } => Vec::new(),
            FleetInput::Example { sigma_sign, .. } => example_expected_failures(*sigma_sign),
        }
    }
}

/// Clauses that fail on the three-dimensional example: with `c -> c` sigma is
/// not an automorphism and `H = <a>` is not closed under `*`; with `c -> -c`
/// the triality identity fails on `c`, and `H = <a, c>` is closed but
/// `a * a = -2c`, the only nonzero product; every iterated product then
/// vanishes, so only anticommutativity and the rho transfer break. Either way
/// `[a, rho(a)] = c`.
pub fn example_expected_failures(sigma_sign: i64) -> Vec<&'static str> {
    if sigma_sign == 1 {
        vec![
            "lie_triality.sigma_automorphism",
            "rho_commutation.diagonal",
            "malcev.h_closed",
        ]
    } else {
        vec![
            "lie_triality.identity",
            "rho_commutation.diagonal",
            "malcev.anticommutative",
            "bridge.rho_transfer",
        ]
    }
}

/// `n` with `e = p^n`, at least 1.
fn exponent_log(e: u64, p: u32) -> u32 {
    let mut n = 0;
    let mut x = 1u64;
    while x < e {
        x *= p as u64;
        n += 1;
    }
    n.max(1)
}

fn group_entry(name: &str, t: TrialityGroup, p: u32, n: u32) -> FleetInput {
    FleetInput::Group {
        name: name.to_string(),
        triality: Box::new(t),
        p,
        n,
    }
}

/// Doublings of `C_5`, `C_5 x C_5`, `C_7`, the Heisenberg and modular groups
/// of order 125, and both sign versions of the three-dimensional example.
pub fn builtin_fleet() -> Result<Vec<FleetInput>> {
    let c5 = FiniteGroup::cyclic(5)?;
    let c5c5 = FiniteGroup::elementary_abelian(5, 2)?;
    let c7 = FiniteGroup::cyclic(7)?;
    Ok(vec![
        group_entry("abelian_doubling(C5)", abelian_doubling(&c5)?, 5, 1),
        group_entry("abelian_doubling(C5xC5)", abelian_doubling(&c5c5)?, 5, 1),
        group_entry("abelian_doubling(C7)", abelian_doubling(&c7)?, 7, 1),
        group_entry(
            "group_doubling(Heisenberg125)",
            group_doubling(&FiniteGroup::heisenberg(5)?)?,
            5,
            1,
        ),
        group_entry(
            "group_doubling(Modular125)",
            group_doubling(&FiniteGroup::modular(5)?)?,
            5,
            2,
        ),
        FleetInput::Example {
            name: "example_4(sigma_sign=+1)".into(),
            p: 5,
            sigma_sign: 1,
        },
        FleetInput::Example {
            name: "example_4(sigma_sign=-1)".into(),
            p: 5,
            sigma_sign: -1,
        },
    ])
}

/// The prime `p` with `order = p^k`, if any.
fn prime_of(order: usize) -> Option<u32> {
    (2..=order as u64)
        .find(|d| (order as u64).is_multiple_of(*d))
        .and_then(|d| is_power_of(order as u64, d).then_some(d as u32))
}

/// Turns a parsed file into a fleet input. `p` comes from `p_hint`, else from
/// the group order; `n` from the loop exponent.
pub fn fleet_input(name: &str, input: Input) -> Result<FleetInput> {
    let t = match input {
        Input::Example { p, sigma_sign } => {
            return Ok(FleetInput::Example {
                name: name.to_string(),
                p,
                sigma_sign,
            })
        }
        Input::Raw(r) => {
            let hint = r.p_hint;
            let t = r.certify()?;
            let p = hint.or_else(|| prime_of(t.group().order())).unwrap_or(5);
            return finish_entry(name, t, p);
        }
        Input::Certified(t) => t,
    };
    let p = prime_of(t.group().order()).unwrap_or(5);
    finish_entry(name, t, p)
}

fn finish_entry(name: &str, t: TrialityGroup, p: u32) -> Result<FleetInput> {
    let l = crate::triality::moufang_from_triality(&t)?;
    let n = loop_exponent(&l.loop_).map(|e| exponent_log(e, p)).unwrap_or(1);
    Ok(group_entry(name, t, p, n))
}

/// `*.json` files of a directory, sorted by name; unreadable entries come back as errors.
pub fn load_fleet_dir(dir: &Path) -> Result<Vec<(String, Result<FleetInput>)>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|path| {
            let name = path.file_name().unwrap().to_string_lossy().to_string();
            let entry = read_input(&path).and_then(|i| fleet_input(&name, i));
            (name, entry)
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaRow {
    pub input: String,
    pub check: String,
    pub outcome: Outcome,
    pub expected: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LemmaRow {
    pub fn as_expected(&self) -> bool {
        match self.expected {
            // skips are acceptable where a pass is expected, provided they carry a reason
            Outcome::Pass => self.outcome != Outcome::Fail,
            e => self.outcome == e,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaTable {
    pub rows: Vec<LemmaRow>,
    pub unexpected: usize,
}

/// One row per (input, check), compared against the expected outcome.
pub fn verify_lemmas(entries: Vec<(String, Result<FleetInput>)>, caps: &Caps, policy: &SweepPolicy) -> LemmaTable {
    let mut rows = Vec::new();
    for (name, entry) in entries {
        let run = entry.and_then(|e| e.run(caps, policy).map(|r| (r, e.expected_failures())));
        match run {
            Err(e) => rows.push(LemmaRow {
                input: name,
                check: "input".into(),
                outcome: Outcome::Fail,
                expected: Outcome::Pass,
                note: Some(e.to_string()),
            }),
            Ok((rep, expected_fail)) => {
                for c in rep.report.checks {
                    let expected = if expected_fail.contains(&c.check.as_str()) {
                        Outcome::Fail
                    } else {
                        Outcome::Pass
                    };
                    let note = c.reason.clone().or_else(|| c.witnesses.first().cloned());
                    rows.push(LemmaRow {
                        input: name.clone(),
                        check: c.check,
                        outcome: c.outcome,
                        expected,
                        note,
                    });
                }
            }
        }
    }
    let unexpected = rows.iter().filter(|r| !r.as_expected()).count();
    LemmaTable { rows, unexpected }
}

impl LemmaTable {
    pub fn render(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let mark = match (r.outcome, r.expected, r.as_expected()) {
                (Outcome::Fail, Outcome::Fail, _) => "fail (expected)".to_string(),
                (o, _, true) => o.to_string(),
                (o, e, false) => format!("{o} (UNEXPECTED, wanted {e})"),
            };
            s.push_str(&format!("{:<32} {:<34} {}", r.input, r.check, mark));
            if let Some(n) = &r.note {
                s.push_str(&format!("  [{n}]"));
            }
            s.push('\n');
        }
        s.push_str(&format!("{} rows, {} unexpected\n", self.rows.len(), self.unexpected));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_logs() {
        assert_eq!(exponent_log(1, 5), 1);
        assert_eq!(exponent_log(5, 5), 1);
        assert_eq!(exponent_log(25, 5), 2);
        assert_eq!(prime_of(125), Some(5));
        assert_eq!(prime_of(12), None);
        assert_eq!(prime_of(1), None);
    }

    #[test]
    fn abelian_pipeline() {
        let t = abelian_doubling(&FiniteGroup::elementary_abelian(5, 2).unwrap()).unwrap();
        let r = run_pipeline(&t, 5, 1, &Caps::default(), &SweepPolicy::exhaustive()).unwrap();
        assert!(r.all_passed(), "{}", r.render());
        assert_eq!(r.h_size, Some(25));
        assert_eq!(r.loop_order, 25);
        assert_eq!(r.h_nilpotency_class, Some(1));
    }

    #[test]
    fn examples_fail_where_expected() {
        for sign in [1, -1] {
            let r = run_example(5, sign, &Caps::default()).unwrap();
            let mut failed: Vec<&str> = r.report.failed_checks();
            failed.sort();
            let mut want = example_expected_failures(sign);
            want.sort();
            assert_eq!(failed, want, "{}", r.render());
        }
    }

    #[test]
    fn non_p_group_refused() {
        let t = abelian_doubling(&FiniteGroup::cyclic(5).unwrap()).unwrap();
        assert!(matches!(
            run_pipeline(&t, 7, 1, &Caps::default(), &SweepPolicy::default()),
            Err(Error::NotPGroup { .. })
        ));
    }
}
