//! What observational data can still say when no experiment exists.
//!
//! With unmeasured confounding, the observed outcome rates p(y|x) and
//! p(y|x') say nothing about the latent interventional rates — unless an
//! analyst is willing to bracket them. Given brackets [m_x, M_x] and
//! [m_x', M_x'] on the rates the *whole* population would show under each
//! assignment, immunity gets an interval; sweeping the brackets maps how
//! conclusions respond to the assumption.
//!
//! Run with: `cargo run --example confounding_sensitivity`

use std::path::PathBuf;

use probcause::{
    parameter_regions, sensitivity_bounds, sweep, Input, SensitivityParams, SweepBound,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fixtures/{name}"))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let input = Input::load(&fixture("sensitivity.json"))?;
    let joint = input.joint_only()?;

    println!("Observational joint only (no experiment):");
    println!(
        "  p(x,y) = {:.3}, p(x,y') = {:.3}, p(x',y) = {:.3}, p(x',y') = {:.3}",
        joint.p_xy(),
        joint.p_xyp(),
        joint.p_xpy(),
        joint.p_xpyp()
    );
    println!();

    // Which brackets are even coherent? The possible region is forced by
    // the law of total probability; the informative region is where a
    // bracket actually moves a bound.
    let regions = parameter_regions(&joint)?;
    println!(
        "Lower-rate m_x   possible {}, informative {}",
        regions.possible.min_x, regions.informative.min_x
    );
    println!(
        "Lower-rate m_x'  possible {}, informative {}",
        regions.possible.min_xp, regions.informative.min_xp
    );
    println!("Upper-rate M_x   possible {}", regions.possible.max_x);
    println!("Upper-rate M_x'  possible {}", regions.possible.max_xp);
    println!();

    // A domain expert brackets the latent rates; immunity follows.
    let params = SensitivityParams::new(0.8, 0.9, 0.2, 0.7)?;
    let interval = sensitivity_bounds(&joint, &params)?;
    println!("Expert brackets m_x=0.8, M_x=0.9, m_x'=0.2, M_x'=0.7:");
    println!(
        "  p(immunity) in [{:.3}, {:.3}]  (width {:.3})",
        interval.lower,
        interval.upper,
        interval.width()
    );
    println!("  lower pinned by: {}", interval.active_lower);
    println!("  upper pinned by: {}", interval.active_upper);
    println!();

    // Vacuous brackets recover the assumption-free envelope.
    let vacuous = sensitivity_bounds(&joint, &SensitivityParams::new(0.0, 1.0, 0.0, 1.0)?)?;
    println!(
        "No assumptions at all: [{:.3}, {:.3}] — the data alone only cap",
        vacuous.lower, vacuous.upper
    );
    println!("  immunity at p(y) = {:.3}.", joint.p_y());
    println!();

    // Sweep the lower bound over its two parameters to see where the
    // brackets start to bite.
    let grid = sweep(&joint, SweepBound::Lower, 5)?;
    println!("Lower bound over (m_x down, m_x' across), 5x5 grid:");
    print!("{}", indent(&grid.to_csv()));
    println!();
    println!("Zeros fill the non-informative corner; the bound engages only");
    println!("once a bracket crosses into its informative region.");

    Ok(())
}

fn indent(text: &str) -> String {
    text.lines().map(|l| format!("  {l}\n")).collect()
}
