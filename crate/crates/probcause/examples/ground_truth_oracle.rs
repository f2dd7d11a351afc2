//! Validating every bound against models where truth is known.
//!
//! A canonical model assigns each confounder level a full response-type
//! distribution, so p(benefit), p(harm), p(immunity), p(doom) are exact —
//! no bounding involved. Evaluating the model also yields the data an
//! observer would see. Feeding that data back through the bounding
//! machinery and checking that every interval brackets its exact value is
//! the crate's core self-test; this example shows it in miniature.
//!
//! Run with: `cargo run --example ground_truth_oracle`

use probcause::{
    immunity_conditions, response_bounds, sample_canonical, sensitivity_bounds, EpsilonBound,
    ResponseTarget,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = sample_canonical(3, 2026);
    let eval = model.evaluate();

    println!("Sampled ground-truth model (3 confounder levels, seed 2026):");
    println!(
        "  exact p(benefit) = {:.4}, p(harm) = {:.4}, p(immunity) = {:.4}, p(doom) = {:.4}",
        eval.exact.benefit, eval.exact.harm, eval.exact.immunity, eval.exact.doom
    );
    println!(
        "  induced data: p(y_x) = {:.4}, p(y_x') = {:.4}, p(x,y) = {:.4}",
        eval.exp.p_y_do_x(),
        eval.exp.p_y_do_xp(),
        eval.joint.p_xy()
    );
    println!();

    println!("Interval vs truth for each response type:");
    let mut all_contained = true;
    for target in ResponseTarget::ALL {
        let interval = response_bounds(target, &eval.joint, &eval.exp)?;
        let truth = eval.exact.of(target);
        let contained = interval.contains_within(truth, 1e-9);
        all_contained &= contained;
        println!(
            "  {:<9} [{:.4}, {:.4}]  truth {:.4}  {}",
            target.to_string(),
            interval.lower,
            interval.upper,
            truth,
            if contained { "inside" } else { "OUTSIDE" }
        );
    }
    assert!(all_contained, "a bound failed to contain its exact value");
    println!();

    // Decision conditions are sound in both directions around the truth.
    let truth = eval.exact.immunity;
    for cap in [truth * 0.5, truth, truth * 1.5] {
        let report = immunity_conditions(&eval.joint, &eval.exp, EpsilonBound::new(cap.min(1.0))?);
        println!(
            "  cap {:.4}: sufficient {}, necessary {}  (truth {:.4})",
            cap, report.sufficient_holds, report.necessary_holds, truth
        );
        if truth <= cap {
            assert!(
                report.necessary_holds,
                "necessary conditions must hold when the cap is true"
            );
        }
        if report.sufficient_holds {
            assert!(
                truth <= cap + 1e-9,
                "sufficient conditions may not overpromise"
            );
        }
    }
    println!();

    // The confounding brackets computed from the model itself are honest:
    // the sensitivity interval at the true latent rates contains the truth.
    let interval = sensitivity_bounds(&eval.joint, &eval.true_params)?;
    println!(
        "Sensitivity interval at the true latent rates: [{:.4}, {:.4}]",
        interval.lower, interval.upper
    );
    println!(
        "  contains exact immunity {:.4}: {}",
        eval.exact.immunity,
        interval.contains_within(eval.exact.immunity, 1e-9)
    );
    assert!(interval.contains_within(eval.exact.immunity, 1e-9));
    println!();
    println!("All checks passed. The full test suite repeats this over");
    println!("thousands of sampled models.");

    Ok(())
}
