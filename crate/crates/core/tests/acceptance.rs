//! One line per acceptance criterion; exits nonzero if any fails.

use std::path::Path;
use std::process::Command;

use trialgebra::config::{Caps, SweepPolicy};
use trialgebra::free_malcev::{engel_quotient_dims, free_malcev_dims, left_engel_monomial, vanishes_in_quotient};
use trialgebra::graded_lie::{build_lp_algebra, example_4_algebra, induce_triality, verify_restricted_axioms};
use trialgebra::group_algebra::{check_filtration, zassenhaus_filtration, GroupAlgebra};
use trialgebra::groups::FiniteGroup;
use trialgebra::malcev::{
    check_alpha_power, check_bridge_identities, check_engel_hypotheses, check_lie_engel, check_malcev_identities,
    check_rho_commutation, check_series_properties, extract_h, series, MalcevAlgebra, SeriesKind,
};
use trialgebra::moufang::check_moufang;
use trialgebra::pipeline::{builtin_fleet, run_example, run_pipeline, FleetInput};
use trialgebra::report::{Outcome, Report};
use trialgebra::triality::{full_report, TrialityGroup};

type Check = std::result::Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(what: &str, rep: &Report) -> Check {
    ensure(rep.all_passed(), || format!("{what}: {:?}", rep.failed_checks()))
}

fn passes(what: &str, rep: &Report, check: &str) -> Check {
    ensure(rep.outcome(check) == Some(Outcome::Pass), || {
        format!("{what}: {check} is {:?}", rep.outcome(check))
    })
}

struct Member {
    name: String,
    t: TrialityGroup,
    p: u32,
    n: u32,
}

fn group_fleet() -> Vec<Member> {
    builtin_fleet()
        .unwrap()
        .into_iter()
        .filter_map(|e| match e {
            FleetInput::Group { name, triality, p, n } => Some(Member {
                name,
                t: *triality,
                p,
                n,
            }),
            FleetInput::Example { .. } => None,
        })
        .collect()
}

fn fleet_h(m: &Member) -> std::result::Result<(trialgebra::graded_lie::LieTriality, MalcevAlgebra), String> {
    let lt = induce_triality(&m.t, m.p, &Caps::default()).map_err(|e| format!("{}: {e}", m.name))?;
    let h = extract_h(&lt).map_err(|e| format!("{}: {e}", m.name))?;
    Ok((lt, h))
}

fn triality_to_moufang(fleet: &[Member]) -> Check {
    let policy = SweepPolicy::exhaustive();
    for m in fleet {
        let (l, rep) = full_report(&m.t, &policy).map_err(|e| e.to_string())?;
        all_pass(&m.name, &rep)?;
        let mou = check_moufang(&l.loop_, &policy);
        all_pass(&m.name, &mou)?;
        ensure(mou.checks.iter().all(|c| !c.sampled), || {
            format!("{}: Moufang sweep was sampled", m.name)
        })?;
    }
    Ok(())
}

fn zassenhaus(fleet: &[Member]) -> Check {
    let caps = Caps::default();
    let c5 = FiniteGroup::cyclic(5).unwrap();
    let ga = GroupAlgebra::new(&c5, 5).map_err(|e| e.to_string())?;
    for i in 1..=5 {
        let d = ga.omega_power(i).map_err(|e| e.to_string())?.dim();
        ensure(d == 5 - i, || format!("dim w^{i} of F_5 C_5 is {d}"))?;
    }
    let f = zassenhaus_filtration(&c5, 5, &caps).map_err(|e| e.to_string())?;
    ensure(f.term(2).order() == 1, || "C_5: G_2 is not trivial".into())?;

    let heis = FiniteGroup::heisenberg(5).unwrap();
    let f = zassenhaus_filtration(&heis, 5, &caps).map_err(|e| e.to_string())?;
    let z = heis.center();
    ensure(f.term(2).elements() == z.elements(), || {
        "Heisenberg: G_2 is not the center".into()
    })?;
    ensure(f.term(3).order() == 1, || "Heisenberg: G_3 is not trivial".into())?;
    ensure(f.quotient_dims() == vec![2, 1], || {
        format!("Heisenberg quotient dims {:?}", f.quotient_dims())
    })?;

    for m in fleet {
        let g = m.t.group();
        let f = zassenhaus_filtration(g, m.p, &caps).map_err(|e| e.to_string())?;
        let rep = check_filtration(g, &f);
        passes(&m.name, &rep, "filtration.commutator_containment")?;
        all_pass(&m.name, &rep)?;
    }
    Ok(())
}

fn restricted(fleet: &[Member]) -> Check {
    let caps = Caps::default();
    for m in fleet {
        let l = build_lp_algebra(m.t.group(), m.p, &caps).map_err(|e| e.to_string())?;
        let rep = verify_restricted_axioms(&l);
        for c in ["restricted.scalar", "restricted.sum_envelope", "restricted.adjoint"] {
            passes(&m.name, &rep, c)?;
        }
        ensure(!rep.any_failed(), || format!("{}: {:?}", m.name, rep.failed_checks()))?;
    }
    let modular = FiniteGroup::modular(5).unwrap();
    let l = build_lp_algebra(&modular, 5, &caps).map_err(|e| e.to_string())?;
    let nonzero = l
        .degree_indices(1)
        .into_iter()
        .any(|i| l.pmap_of_basis(i).is_some_and(|v| v.iter().any(|&x| x != 0)));
    ensure(nonzero, || "p-map vanishes on degree 1 of L_p(modular 125)".into())
}

fn induced_triality(fleet: &[Member]) -> Check {
    for m in fleet {
        let lt = induce_triality(&m.t, m.p, &Caps::default()).map_err(|e| e.to_string())?;
        all_pass(&m.name, &lt.verify())?;
    }
    Ok(())
}

fn malcev_and_bridge(fleet: &[Member]) -> Check {
    for m in fleet {
        let (lt, h) = fleet_h(m)?;
        let rep = check_malcev_identities(&h);
        for c in [
            "malcev.anticommutative",
            "malcev.identity_linearized",
            "malcev.identity",
        ] {
            passes(&m.name, &rep, c)?;
        }
        let bridge = check_bridge_identities(&lt, &h).map_err(|e| e.to_string())?;
        passes(&m.name, &bridge, "bridge.bracket_from_star")?;
        all_pass(&m.name, &bridge)?;
    }
    Ok(())
}

fn rho_commutation_dichotomy(fleet: &[Member]) -> Check {
    for m in fleet {
        let (lt, _) = fleet_h(m)?;
        all_pass(&m.name, &check_rho_commutation(&lt))?;
    }
    // Worked by hand: with e0 = a, e1 = b, e2 = c = [a, b], the first column of
    // rho is e1, so [a, rho(a)] = [a, b] = c in both sign versions.
    // Sign +1 keeps c fixed, which breaks sigma as an automorphism; sign -1
    // negates c, which breaks the triality identity on c.
    let clause = [(1, "lie_triality.sigma_automorphism"), (-1, "lie_triality.identity")];
    for (sign, broken) in clause {
        let ex = example_4_algebra(5, sign).map_err(|e| e.to_string())?;
        let failed = ex.report.failed_checks();
        ensure(failed == vec![broken], || {
            format!("sign {sign}: failing clauses {failed:?}")
        })?;
        let rho = check_rho_commutation(&ex.triality);
        let diag = rho.get("rho_commutation.diagonal").ok_or("no diagonal check")?;
        ensure(diag.failed(), || format!("sign {sign}: rho commutation did not fail"))?;
        let w = diag.witnesses.first().cloned().unwrap_or_default();
        ensure(w.contains("[0, 0, 1]"), || format!("sign {sign}: witness {w}"))?;
        ensure(ex.a_rho_bracket == vec![0, 0, 1], || {
            format!("[a, a^rho] = {:?}", ex.a_rho_bracket)
        })?;
    }
    Ok(())
}

fn engel_at_five(fleet: &[Member]) -> Check {
    let caps = Caps::default();
    let m = fleet
        .iter()
        .find(|m| m.name.contains("Heisenberg"))
        .ok_or("no Heisenberg member")?;
    let (lt, h) = fleet_h(m)?;
    let e = |x: trialgebra::error::Result<Report>| x.map_err(|e| e.to_string());
    let star = e(check_engel_hypotheses(&h, 5, &caps, 0, 1))?;
    all_pass("ad*(a)^5 and its 120-term sum", &star)?;
    let lie = e(check_lie_engel(&lt, &h, 5, &caps, 0, 1))?;
    all_pass("ad(a)^5 on L", &lie)?;
    let alpha = e(check_alpha_power(&lt, 1, &caps, 0, 1))?;
    passes("alpha power k=1", &alpha, "alpha_power.single")?;
    all_pass("alpha power k=1", &alpha)
}

fn series_checks(fleet: &[Member]) -> Check {
    for m in fleet {
        let (_, h) = fleet_h(m)?;
        let lower = series(&h, SeriesKind::LowerPower);
        ensure(lower.reaches_zero, || {
            format!("{}: lower power dims {:?}", m.name, lower.dims)
        })?;
        passes(&m.name, &check_series_properties(&h), "series.kuzmin")?;
    }
    let cross = MalcevAlgebra::cross_product(5).map_err(|e| e.to_string())?;
    let lower = series(&cross, SeriesKind::LowerPower);
    ensure(!lower.reaches_zero && lower.dims.iter().all(|&d| d == 3), || {
        format!("cross product lower power dims {:?}", lower.dims)
    })
}

fn free_engine() -> Check {
    let caps = Caps::default();
    let e = |x| format!("{x}");
    let t = free_malcev_dims(2, 5, 3, &caps).map_err(e)?;
    ensure(t.totals == vec![2, 1, 2], || format!("M(2) totals {:?}", t.totals))?;
    let free2 = free_malcev_dims(2, 5, 6, &caps).map_err(e)?;
    let free3 = free_malcev_dims(3, 5, 5, &caps).map_err(e)?;
    ensure(free2.dominates_witt() && free3.dominates_witt(), || "below Witt".into())?;
    let quot = engel_quotient_dims(2, 5, 1, 6, &caps).map_err(e)?;
    ensure(quot.bounded_by(&free2), || "Engel quotient exceeds M(2)".into())?;
    let (_, w) = left_engel_monomial(0, 1, 5).ok_or("no Engel monomial")?;
    ensure(w.to_string() == "(x1 (x1 (x1 (x1 (x1 x2)))))", || {
        format!("monomial {w}")
    })?;
    ensure(vanishes_in_quotient(2, 5, 1, &w).map_err(e)?, || {
        format!("{w} survives")
    })
}

fn pipeline_end_to_end(fleet: &[Member]) -> Check {
    let ab = fleet
        .iter()
        .find(|m| m.name.contains("C5xC5"))
        .ok_or("no C5xC5 member")?;
    let r = run_pipeline(&ab.t, 5, 1, &Caps::default(), &SweepPolicy::exhaustive()).map_err(|e| e.to_string())?;
    ensure(r.h_size == Some(25) && r.loop_order == 25, || {
        format!("p^dim H = {:?}, |U| = {}", r.h_size, r.loop_order)
    })?;
    all_pass(&ab.name, &r.report)?;
    for m in fleet {
        let r = run_pipeline(&m.t, m.p, m.n, &Caps::default(), &SweepPolicy::default()).map_err(|e| e.to_string())?;
        ensure(!r.report.any_failed(), || {
            format!("{}: {:?}", m.name, r.report.failed_checks())
        })?;
    }
    // failure rows of the example, by the analysis in the dichotomy check
    let want: [(i64, &[&str]); 2] = [
        (
            1,
            &[
                "lie_triality.sigma_automorphism",
                "malcev.h_closed",
                "rho_commutation.diagonal",
            ],
        ),
        (
            -1,
            &[
                "bridge.rho_transfer",
                "lie_triality.identity",
                "malcev.anticommutative",
                "rho_commutation.diagonal",
            ],
        ),
    ];
    for (sign, rows) in want {
        let r = run_example(5, sign, &Caps::default()).map_err(|e| e.to_string())?;
        let mut failed = r.report.failed_checks();
        failed.sort();
        ensure(failed == rows, || format!("example sign {sign}: {failed:?}"))?;
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fleet");
    let mut files: Vec<_> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .flatten()
        .map(|e| e.path())
        .collect();
    files.sort();
    ensure(files.len() == 7, || format!("{} fleet files", files.len()))?;
    for f in files {
        let out = Command::new(env!("CARGO_BIN_EXE_trialgebra"))
            .arg("burnside-pipeline")
            .arg(&f)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || {
            format!("{} exits {:?}", f.display(), out.status.code())
        })?;
    }
    Ok(())
}

fn main() {
    let fleet = group_fleet();
    let criteria: Vec<Criterion> = vec![
        (
            "triality groups give Moufang loops",
            Box::new(|| triality_to_moufang(&fleet)),
        ),
        ("Zassenhaus filtration", Box::new(|| zassenhaus(&fleet))),
        ("restricted Lie axioms", Box::new(|| restricted(&fleet))),
        ("induced triality on L_p(G)", Box::new(|| induced_triality(&fleet))),
        (
            "H closed, Malcev and bridge identities",
            Box::new(|| malcev_and_bridge(&fleet)),
        ),
        ("[a, a^rho] dichotomy", Box::new(|| rho_commutation_dichotomy(&fleet))),
        ("Engel operators at p^n = 5", Box::new(|| engel_at_five(&fleet))),
        (
            "series, Kuzmin, cross-product control",
            Box::new(|| series_checks(&fleet)),
        ),
        ("free Malcev engine", Box::new(free_engine)),
        ("end-to-end pipeline", Box::new(|| pipeline_end_to_end(&fleet))),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let res = run();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({secs:.1}s)", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {e}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
