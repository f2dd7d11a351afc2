//! End-to-end acceptance gate.
//!
//! Each test below is one scenario-level guarantee about the crate, checked
//! at its stated tolerance and (where it matters) its runtime budget. Every
//! test prints exactly one `criterion <name>: PASS|FAIL` line — run with
//! `cargo test --test acceptance -- --nocapture` to watch the verdicts.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use probcause::{
    ate, epsilon_feasible_min, epsilon_response_bounds, immunity_conditions, parameter_regions,
    response_bounds, sample_canonical, sensitivity_bounds, sensitivity_bounds_unchecked, sweep,
    CanonicalModel, ConfoundedModel, EpsilonBound, ExperimentalMarginals, MediationModel,
    ObservationalJoint, ResponseTarget, SensitivityParams, SweepBound,
};

const EXACT: f64 = 1e-12;
const NUMERIC: f64 = 1e-9;
const SCENARIO: f64 = 0.005;

/// Collects labeled failures for one scenario and prints a single verdict.
struct Criterion {
    name: &'static str,
    failures: Vec<String>,
    started: Instant,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Criterion {
            name,
            failures: Vec::new(),
            started: Instant::now(),
        }
    }

    fn check(&mut self, label: &str, ok: bool) {
        if !ok {
            self.failures.push(label.to_string());
        }
    }

    /// |actual − expected| ≤ tol, NaN-rejecting.
    fn check_close(&mut self, label: &str, actual: f64, expected: f64, tol: f64) {
        // A NaN comparison is false, so NaN anywhere counts as a failure.
        let close = (actual - expected).abs() <= tol;
        if !close {
            self.failures.push(format!(
                "{label}: got {actual}, want {expected} (tol {tol})"
            ));
        }
    }

    fn finish(self, budget: Option<Duration>) {
        let elapsed = self.started.elapsed();
        let mut failures = self.failures;
        if let Some(budget) = budget {
            if elapsed > budget {
                failures.push(format!("runtime {elapsed:.2?} exceeds budget {budget:.2?}"));
            }
        }
        if failures.is_empty() {
            println!("criterion {}: PASS ({elapsed:.2?})", self.name);
        } else {
            println!("criterion {}: FAIL", self.name);
            for failure in &failures {
                println!("  - {failure}");
            }
            panic!("criterion {} failed:\n{}", self.name, failures.join("\n"));
        }
    }
}

fn trial_model() -> ConfoundedModel {
    ConfoundedModel::new(
        vec![0.3, 0.7],
        vec![0.2, 0.9],
        vec![0.9, 0.7],
        vec![0.8, 0.1],
    )
    .unwrap()
}

fn vaccine_model() -> ConfoundedModel {
    ConfoundedModel::new(
        vec![0.4, 0.6],
        vec![0.1, 0.4],
        vec![0.9, 0.2],
        vec![0.3, 0.4],
    )
    .unwrap()
}

fn confounded_study_model() -> ConfoundedModel {
    ConfoundedModel::new(
        vec![0.2, 0.8],
        vec![0.4, 0.2],
        vec![0.9, 0.8],
        vec![0.2, 0.7],
    )
    .unwrap()
}

fn drug_mediation_model() -> MediationModel {
    MediationModel::new(0.6, 0.75, 0.4, 0.8, 0.4, 0.3, 0.2).unwrap()
}

/// Drug-trial scenario: experiment + observations bound benefit, and an
/// immunity cap of 0.25 is both defensible and profitable.
#[test]
fn criterion_trial_benefit_bounds() {
    let mut c = Criterion::new("trial-benefit-bounds");

    let eval = trial_model().evaluate();
    c.check_close("p(y_x)", eval.exp.p_y_do_x(), 0.76, EXACT);
    c.check_close("p(y_x')", eval.exp.p_y_do_xp(), 0.31, EXACT);

    let benefit = response_bounds(ResponseTarget::Benefit, &eval.joint, &eval.exp).unwrap();
    c.check_close("benefit lower", benefit.lower, 0.45, SCENARIO);
    c.check_close("benefit upper", benefit.upper, 0.61, SCENARIO);

    let strict = immunity_conditions(&eval.joint, &eval.exp, EpsilonBound::ZERO);
    c.check(
        "necessary conditions fail at cap 0",
        !strict.necessary_holds,
    );
    let relaxed = immunity_conditions(&eval.joint, &eval.exp, EpsilonBound::new(0.25).unwrap());
    c.check(
        "necessary conditions hold at cap 0.25",
        relaxed.necessary_holds,
    );

    let capped = epsilon_response_bounds(
        ResponseTarget::Benefit,
        &eval.joint,
        &eval.exp,
        EpsilonBound::new(0.25).unwrap(),
    )
    .unwrap();
    c.check_close("capped lower", capped.lower, 0.51, SCENARIO);
    c.check_close("capped upper", capped.upper, 0.61, SCENARIO);

    c.finish(Some(Duration::from_secs(1)));
}

/// Vaccine scenario: immunity and benefit both land in their published
/// intervals.
#[test]
fn criterion_vaccine_response_types() {
    let mut c = Criterion::new("vaccine-response-types");

    let eval = vaccine_model().evaluate();
    let immunity = response_bounds(ResponseTarget::Immunity, &eval.joint, &eval.exp).unwrap();
    c.check_close("immunity lower", immunity.lower, 0.0, SCENARIO);
    c.check_close("immunity upper", immunity.upper, 0.34, SCENARIO);

    let benefit = response_bounds(ResponseTarget::Benefit, &eval.joint, &eval.exp).unwrap();
    c.check_close("benefit lower", benefit.lower, 0.14, SCENARIO);
    c.check_close("benefit upper", benefit.upper, 0.48, SCENARIO);

    c.finish(Some(Duration::from_secs(1)));
}

/// Front-door scenario: the existing drug passes the necessary conditions
/// for rare immunity, the mediated-only reformulation provably cannot.
#[test]
fn criterion_mediated_reformulation() {
    let mut c = Criterion::new("mediated-reformulation");

    let med = drug_mediation_model();
    let joint = med.observational_joint();
    let direct = med.direct_marginals();

    let report = immunity_conditions(&joint, &direct, EpsilonBound::ZERO);
    c.check("direct necessary conditions hold", report.necessary_holds);
    for (id, left, right) in [
        ("p(y_x)+p(y_x')<=1+eps", 0.94, 1.0),
        ("p(y_x)<=p(x,y)+p(x',y')+eps", 0.7, 0.724),
        ("p(y_x')<=p(x,y')+p(x',y)+eps", 0.24, 0.276),
    ] {
        let clause = report.clauses.iter().find(|cl| cl.id == id);
        match clause {
            Some(clause) => {
                c.check_close(&format!("{id} left"), clause.left, left, NUMERIC);
                c.check_close(&format!("{id} right"), clause.right, right, NUMERIC);
                c.check(&format!("{id} satisfied"), clause.satisfied);
            }
            None => c.check(&format!("{id} present"), false),
        }
    }

    let q = med.front_door_marginals();
    c.check_close("q(y_x)", q.q_y_do_x, 0.53, NUMERIC);
    c.check_close("q(y_x')", q.q_y_do_xp, 0.432, NUMERIC);

    let indirect = med.indirect_immunity_conditions(EpsilonBound::ZERO);
    c.check(
        "indirect necessary conditions fail",
        !indirect.necessary_holds,
    );
    match indirect.necessary_witness() {
        Some(witness) => {
            c.check(
                "witness is the harm-side clause",
                witness.id == "q(y_x')<=p(x,y')+p(x',y)+eps",
            );
            c.check_close("witness left", witness.left, 0.432, NUMERIC);
            c.check_close("witness right", witness.right, 0.276, NUMERIC);
        }
        None => c.check("witness present", false),
    }

    c.finish(Some(Duration::from_secs(1)));
}

/// Confounded-study scenario: latent-rate brackets recover a useful
/// immunity interval, and the full sweep respects the region geometry.
#[test]
fn criterion_confounding_brackets() {
    let mut c = Criterion::new("confounding-brackets");

    let eval = confounded_study_model().evaluate();
    let joint = &eval.joint;

    let immunity = response_bounds(ResponseTarget::Immunity, joint, &eval.exp).unwrap();
    c.check_close("induced immunity lower", immunity.lower, 0.42, SCENARIO);
    c.check_close("induced immunity upper", immunity.upper, 0.60, SCENARIO);

    let at_truth = sensitivity_bounds(joint, &eval.true_params).unwrap();
    c.check_close("bracket lower at truth", at_truth.lower, 0.328, NUMERIC);
    c.check_close("bracket upper at truth", at_truth.upper, 0.64, NUMERIC);

    let marginals = joint.marginals();
    let blind_x = 1.0 - marginals.p_y_given_xp.unwrap(); // p(y'|x')
    let blind_xp = 1.0 - marginals.p_y_given_x.unwrap(); // p(y'|x)

    let lower = sweep(joint, SweepBound::Lower, 101).unwrap();
    let mut zero_cells = 0usize;
    for r in 0..lower.row_axis.steps {
        let m_x = lower.row_axis.value(r);
        for col in 0..lower.col_axis.steps {
            let m_xp = lower.col_axis.value(col);
            let value = lower.value(r, col);
            if m_x <= blind_x + EXACT && m_xp <= blind_xp + EXACT {
                zero_cells += 1;
                if value.abs() > EXACT {
                    c.check(
                        &format!("lower bound zero at uninformative ({m_x:.4}, {m_xp:.4})"),
                        false,
                    );
                }
            }
        }
    }
    c.check("uninformative corner is non-trivial", zero_cells > 100);

    let upper = sweep(joint, SweepBound::Upper, 101).unwrap();
    let cap = joint.p_y() + EXACT;
    let max_seen = upper
        .values()
        .iter()
        .fold(f64::NEG_INFINITY, |acc, v| acc.max(*v));
    c.check(
        &format!("upper sweep capped by p(y) (max {max_seen:.6})"),
        max_seen <= cap,
    );

    c.finish(Some(Duration::from_secs(5)));
}

fn check_identities(c: &mut Criterion, label: &str, model: &CanonicalModel) {
    let eval = model.evaluate();
    let exact = &eval.exact;
    let joint = &eval.joint;
    let exp = &eval.exp;

    let total = exact.benefit + exact.harm + exact.immunity + exact.doom;
    c.check_close(
        &format!("{label}: response types sum to 1"),
        total,
        1.0,
        EXACT,
    );
    c.check_close(
        &format!("{label}: p(y_x) = immunity + benefit"),
        exp.p_y_do_x(),
        exact.immunity + exact.benefit,
        EXACT,
    );
    c.check_close(
        &format!("{label}: p(y_x') = immunity + harm"),
        exp.p_y_do_xp(),
        exact.immunity + exact.harm,
        EXACT,
    );
    c.check_close(
        &format!("{label}: ate = benefit - harm"),
        ate(exp),
        exact.benefit - exact.harm,
        EXACT,
    );

    for target in ResponseTarget::ALL {
        let interval = response_bounds(target, joint, exp).unwrap();
        let truth = exact.of(target);
        if !interval.contains_within(truth, NUMERIC) {
            c.check(
                &format!(
                    "{label}: {target} interval [{:.6}, {:.6}] contains {truth:.6}",
                    interval.lower, interval.upper
                ),
                false,
            );
        }
    }

    // Soundness of the decision conditions in both directions.
    let truth = exact.immunity;
    for cap in [0.0, truth * 0.9, truth, (truth * 1.1).min(1.0), 1.0] {
        let report = immunity_conditions(joint, exp, EpsilonBound::new(cap).unwrap());
        if report.sufficient_holds && truth > cap + NUMERIC {
            c.check(
                &format!("{label}: sufficient conditions overpromise at cap {cap:.4}"),
                false,
            );
        }
        if truth <= cap && !report.necessary_holds {
            c.check(
                &format!("{label}: necessary conditions reject the truth at cap {cap:.4}"),
                false,
            );
        }
    }

    // The bracket interval at the true latent rates is honest.
    let bracket = sensitivity_bounds(joint, &eval.true_params).unwrap();
    if !bracket.contains_within(truth, NUMERIC) {
        c.check(
            &format!(
                "{label}: bracket [{:.6}, {:.6}] contains immunity {truth:.6}",
                bracket.lower, bracket.upper
            ),
            false,
        );
    }

    // Swap coherence: harm is benefit with the exposure roles swapped, doom
    // is immunity with the outcome complemented.
    let swapped_x = joint.swap_exposure();
    let swapped_arms = exp.swap_arms();
    let harm = response_bounds(ResponseTarget::Harm, joint, exp).unwrap();
    let benefit_of_swap =
        response_bounds(ResponseTarget::Benefit, &swapped_x, &swapped_arms).unwrap();
    c.check_close(
        &format!("{label}: harm lower via swap"),
        harm.lower,
        benefit_of_swap.lower,
        EXACT,
    );
    c.check_close(
        &format!("{label}: harm upper via swap"),
        harm.upper,
        benefit_of_swap.upper,
        EXACT,
    );

    let swapped_y = joint.swap_outcome();
    let complemented = exp.complement_outcome();
    let doom = response_bounds(ResponseTarget::Doom, joint, exp).unwrap();
    let immunity_of_swap =
        response_bounds(ResponseTarget::Immunity, &swapped_y, &complemented).unwrap();
    c.check_close(
        &format!("{label}: doom lower via swap"),
        doom.lower,
        immunity_of_swap.lower,
        EXACT,
    );
    c.check_close(
        &format!("{label}: doom upper via swap"),
        doom.upper,
        immunity_of_swap.upper,
        EXACT,
    );

    // Tightening the immunity cap only ever shrinks the benefit interval,
    // and a vacuous cap changes nothing.
    let plain = response_bounds(ResponseTarget::Benefit, joint, exp).unwrap();
    let vacuous =
        epsilon_response_bounds(ResponseTarget::Benefit, joint, exp, EpsilonBound::ONE).unwrap();
    c.check(
        &format!("{label}: cap 1 is a no-op"),
        plain.lower == vacuous.lower && plain.upper == vacuous.upper,
    );
    let feasible = epsilon_feasible_min(joint, exp);
    let mut last_lower = f64::NEG_INFINITY;
    for cap in [1.0, 0.75, 0.5, 0.25, 0.1, 0.0] {
        if cap + 1e-15 < feasible {
            continue;
        }
        let Ok(interval) = epsilon_response_bounds(
            ResponseTarget::Benefit,
            joint,
            exp,
            EpsilonBound::new(cap).unwrap(),
        ) else {
            continue;
        };
        if interval.lower + EXACT < last_lower {
            c.check(
                &format!("{label}: benefit lower not monotone as cap drops ({cap})"),
                false,
            );
        }
        last_lower = interval.lower;
        c.check(
            &format!("{label}: capped upper matches plain upper"),
            interval.upper == plain.upper,
        );
    }
}

/// Ten thousand sampled ground-truth models: every identity, containment,
/// soundness, swap, and monotonicity guarantee, at full tolerance.
#[test]
fn criterion_sampled_models_mass_validation() {
    let mut c = Criterion::new("sampled-models-mass-validation");

    for i in 0..10_000usize {
        let levels = 1 + (i % 4);
        let model = sample_canonical(levels, i as u64);
        check_identities(&mut c, &format!("model {i}"), &model);
        if c.failures.len() > 25 {
            break; // the verdict is already decided; keep the report short
        }
    }

    c.finish(Some(Duration::from_secs(60)));
}

/// A thousand random joints: when brackets collapse onto the observed
/// conditionals (no confounding), the sensitivity interval degenerates to
/// exactly the immunity bounds.
#[test]
fn criterion_no_confounding_degeneracy() {
    let mut c = Criterion::new("no-confounding-degeneracy");

    let mut rng = ChaCha8Rng::seed_from_u64(90210);
    for i in 0..1_000usize {
        let raw: [f64; 4] = [
            rng.random::<f64>() + 1e-6,
            rng.random::<f64>() + 1e-6,
            rng.random::<f64>() + 1e-6,
            rng.random::<f64>() + 1e-6,
        ];
        let total: f64 = raw.iter().sum();
        let joint = ObservationalJoint::new(
            raw[0] / total,
            raw[1] / total,
            raw[2] / total,
            raw[3] / total,
        )
        .unwrap();
        let m = joint.marginals();
        let c_x = m.p_y_given_x.unwrap();
        let c_xp = m.p_y_given_xp.unwrap();

        let exp = ExperimentalMarginals::new(c_x, c_xp).unwrap();
        let immunity = response_bounds(ResponseTarget::Immunity, &joint, &exp).unwrap();

        let collapsed = SensitivityParams::new(c_x, c_x, c_xp, c_xp).unwrap();
        let bracket = sensitivity_bounds_unchecked(&joint, &collapsed);

        c.check_close(
            &format!("joint {i}: lower endpoints coincide"),
            bracket.lower,
            immunity.lower,
            EXACT,
        );
        c.check_close(
            &format!("joint {i}: upper endpoints coincide"),
            bracket.upper,
            immunity.upper,
            EXACT,
        );
        if c.failures.len() > 25 {
            break;
        }
    }

    c.finish(None);
}

/// The smallest feasible immunity cap is exactly the immunity lower bound,
/// even though the two are computed by different formulas.
#[test]
fn criterion_feasible_cap_equals_immunity_floor() {
    let mut c = Criterion::new("feasible-cap-equals-immunity-floor");

    // Fixed scenarios first.
    let fixed: Vec<(&str, ObservationalJoint, ExperimentalMarginals)> = vec![
        (
            "trial",
            trial_model().evaluate().joint,
            trial_model().evaluate().exp,
        ),
        (
            "vaccine",
            vaccine_model().evaluate().joint,
            vaccine_model().evaluate().exp,
        ),
        (
            "confounded study",
            confounded_study_model().evaluate().joint,
            confounded_study_model().evaluate().exp,
        ),
    ];
    for (label, joint, exp) in &fixed {
        let floor = response_bounds(ResponseTarget::Immunity, joint, exp)
            .unwrap()
            .lower;
        c.check_close(
            &format!("{label}: feasible cap equals immunity floor"),
            epsilon_feasible_min(joint, exp),
            floor,
            EXACT,
        );
    }

    // The mediated variant agrees through the front-door marginals.
    let med = drug_mediation_model();
    let q = med.front_door_marginals();
    let exp_q = ExperimentalMarginals::new(q.q_y_do_x, q.q_y_do_xp).unwrap();
    let med_floor = response_bounds(ResponseTarget::Immunity, &med.observational_joint(), &exp_q)
        .unwrap()
        .lower;
    c.check_close(
        "mediated: feasible cap equals immunity floor",
        med.indirect_feasible_min(),
        med_floor,
        EXACT,
    );

    // Then fuzz over sampled ground-truth models.
    for i in 0..2_000usize {
        let model = sample_canonical(1 + (i % 4), 777_000 + i as u64);
        let eval = model.evaluate();
        let floor = response_bounds(ResponseTarget::Immunity, &eval.joint, &eval.exp)
            .unwrap()
            .lower;
        c.check_close(
            &format!("sampled {i}: feasible cap equals immunity floor"),
            epsilon_feasible_min(&eval.joint, &eval.exp),
            floor,
            EXACT,
        );
        if c.failures.len() > 25 {
            break;
        }
    }

    c.finish(None);
}

/// The bracket regions themselves are coherent on every sampled model:
/// true rates sit inside their possible regions.
#[test]
fn criterion_true_rates_lie_in_possible_regions() {
    let mut c = Criterion::new("true-rates-lie-in-possible-regions");

    for i in 0..2_000usize {
        let model = sample_canonical(1 + (i % 4), 13_000 + i as u64);
        let eval = model.evaluate();
        let Ok(regions) = parameter_regions(&eval.joint) else {
            continue; // a degenerate arm has no conditional to bracket
        };
        let p = &eval.true_params;
        let inside = |region: &probcause::Region, value: f64| {
            region.lower - NUMERIC <= value && value <= region.upper + NUMERIC
        };
        c.check(
            &format!("model {i}: m_x in possible region"),
            inside(&regions.possible.min_x, p.min_x()),
        );
        c.check(
            &format!("model {i}: M_x in possible region"),
            inside(&regions.possible.max_x, p.max_x()),
        );
        c.check(
            &format!("model {i}: m_x' in possible region"),
            inside(&regions.possible.min_xp, p.min_xp()),
        );
        c.check(
            &format!("model {i}: M_x' in possible region"),
            inside(&regions.possible.max_xp, p.max_xp()),
        );
        if c.failures.len() > 25 {
            break;
        }
    }

    c.finish(None);
}
