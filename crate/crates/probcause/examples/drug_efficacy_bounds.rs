//! Sharp bounds on who actually benefits from a treatment.
//!
//! A randomized experiment tells us how often recovery happens under
//! treatment and under placebo. An observational study of the same
//! population tells us how choice and recovery move together. Neither
//! identifies the fraction of people the drug *causes* to recover — but
//! combined they squeeze that fraction into a short interval, and a prior
//! cap on immunity (recovery regardless of treatment) tightens it further.
//!
//! Run with: `cargo run --example drug_efficacy_bounds`

use std::path::PathBuf;

use probcause::{
    ate, epsilon_response_bounds, immunity_conditions, response_bounds, EpsilonBound, Input,
    ResponseTarget,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let input = Input::load(&fixture("example1.json"))?;
    let (joint, exp) = input.joint_and_marginals()?;

    println!("Observed data");
    println!(
        "  p(x,y)   = {:.3}   chose the drug, recovered",
        joint.p_xy()
    );
    println!(
        "  p(x,y')  = {:.3}   chose the drug, did not",
        joint.p_xyp()
    );
    println!("  p(x',y)  = {:.3}   declined, recovered", joint.p_xpy());
    println!("  p(x',y') = {:.3}   declined, did not", joint.p_xpyp());
    println!(
        "  p(y_x)   = {:.3}   recovery rate when treatment is assigned",
        exp.p_y_do_x()
    );
    println!(
        "  p(y_x')  = {:.3}   recovery rate when placebo is assigned",
        exp.p_y_do_xp()
    );
    println!();

    // The average treatment effect counts beneficiaries minus the harmed;
    // it is a floor on benefit, not the benefit itself.
    println!("ATE = p(y_x) - p(y_x') = {:.3}", ate(&exp));
    println!();

    let benefit = response_bounds(ResponseTarget::Benefit, &joint, &exp)?;
    println!("p(benefit), data alone:");
    println!(
        "  [{:.3}, {:.3}]  (width {:.3})",
        benefit.lower,
        benefit.upper,
        benefit.width()
    );
    println!("  lower pinned by: {}", benefit.active_lower);
    println!("  upper pinned by: {}", benefit.active_upper);
    println!();

    // Is immunity actually rare here? Check the decision conditions at a
    // few caps before assuming one.
    for cap in [0.0, 0.25] {
        let report = immunity_conditions(&joint, &exp, EpsilonBound::new(cap)?);
        println!(
            "immunity <= {:.2}: necessary conditions {}",
            cap,
            if report.necessary_holds {
                "hold"
            } else {
                "fail"
            }
        );
        if let Some(witness) = report.necessary_witness() {
            println!(
                "  violated: {}  ({:.3} > {:.3})",
                witness.id, witness.left, witness.right
            );
        }
    }
    println!();

    // Accepting the defensible cap of 0.25 tightens the benefit interval.
    let capped = epsilon_response_bounds(
        ResponseTarget::Benefit,
        &joint,
        &exp,
        EpsilonBound::new(0.25)?,
    )?;
    println!("p(benefit), immunity capped at 0.25:");
    println!(
        "  [{:.3}, {:.3}]  (width {:.3})",
        capped.lower,
        capped.upper,
        capped.width()
    );
    println!("  lower pinned by: {}", capped.active_lower);

    Ok(())
}
