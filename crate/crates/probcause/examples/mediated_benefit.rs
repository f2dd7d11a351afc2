//! Judging a planned product that works only through a mediator.
//!
//! An existing drug affects recovery directly and through lowering an
//! enzyme level z. A planned reformulation would keep only the enzyme
//! pathway. Its trial hasn't happened — but the front-door structure lets
//! us compute what assigning it would do, purely from today's data, and
//! run the same decision conditions on those projected marginals.
//!
//! Run with: `cargo run --example mediated_benefit`

use std::path::PathBuf;

use probcause::{immunity_conditions, ClauseRole, EpsilonBound, Input, ResponseTarget};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let input = Input::load(&fixture("mediation.json"))?;
    let med = input.mediation_model()?;

    let joint = med.observational_joint();
    let direct = med.direct_marginals();
    let q = med.front_door_marginals();

    println!("Existing drug (direct + mediated action):");
    println!(
        "  p(y_x) = {:.3}, p(y_x') = {:.3}",
        direct.p_y_do_x(),
        direct.p_y_do_xp()
    );
    let eps = EpsilonBound::ZERO;
    let report = immunity_conditions(&joint, &direct, eps);
    println!(
        "  necessary conditions for rare immunity: {}",
        if report.necessary_holds {
            "hold"
        } else {
            "fail"
        }
    );
    for clause in report
        .clauses
        .iter()
        .filter(|c| c.role == ClauseRole::Necessary)
    {
        println!(
            "    {:<28} {:.3} <= {:.3}  {}",
            clause.id,
            clause.left,
            clause.right,
            if clause.satisfied { "ok" } else { "VIOLATED" }
        );
    }
    println!();

    println!("Planned reformulation (mediated action only):");
    println!(
        "  projected q(y_x) = {:.3}, q(y_x') = {:.3}",
        q.q_y_do_x, q.q_y_do_xp
    );
    let indirect = med.indirect_immunity_conditions(eps);
    println!(
        "  necessary conditions for rare immunity: {}",
        if indirect.necessary_holds {
            "hold"
        } else {
            "fail"
        }
    );
    if let Some(witness) = indirect.necessary_witness() {
        println!(
            "    violated: {}  ({:.3} > {:.3})",
            witness.id, witness.left, witness.right
        );
        println!("    -> no population served only by the enzyme pathway can have");
        println!("       immunity this rare; the premise itself is inconsistent.");
    }
    println!(
        "  smallest defensible immunity cap: {:.3}",
        med.indirect_feasible_min()
    );
    println!();

    println!("Mediated effect measures:");
    let effects = med.indirect_effect_measures();
    println!("  natural indirect effect   {:.3}", effects.nie);
    println!(
        "  interventional indirect   {:.3}  (same by construction here)",
        effects.iie
    );
    println!("  population indirect       {:.3}", effects.piie);
    println!("  front-door total effect   {:.3}", effects.te_frontdoor);
    println!();

    println!("Mediated benefit, tightening as the immunity cap drops:");
    for cap in [1.0, 0.5, 0.4] {
        match med.indirect_response_bounds(ResponseTarget::Benefit, EpsilonBound::new(cap)?) {
            Ok(interval) => println!(
                "  cap {:.1}: [{:.3}, {:.3}]  width {:.3}",
                cap,
                interval.lower,
                interval.upper,
                interval.width()
            ),
            Err(err) => println!("  cap {cap:.1}: {err}"),
        }
    }

    Ok(())
}
