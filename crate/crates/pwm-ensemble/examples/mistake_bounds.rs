//! The worst-case mistake-probability calculators: the static-rule bound,
//! the best-classifier bound, their capped combination, and the three
//! distributed-environment extensions.
//!
//! Run with: cargo run --example mistake_bounds

use pwm_ensemble::bounds::{
    active_bound, bound_async, bound_b, bound_b1, bound_b2, bound_delayed, bound_missing,
    lambda_term,
};

fn main() -> pwm_ensemble::Result<()> {
    let (k, n) = (8, 20_000);

    println!("ideal environment, K = {k}, N = {n}");
    println!("p_opt  p_star v*   B1        B2        B         active");
    for (p_opt, p_star, v_star) in [
        (0.0, 0.0, 8),
        (0.0, 0.45, 1),
        (0.02, 0.15, 1),
        (0.10, 0.12, 2),
        (0.30, 0.35, 1),
    ] {
        let b1 = bound_b1(k, n, p_opt)?;
        let b2 = bound_b2(k, n, p_star, v_star)?;
        let b = bound_b(k, n, p_opt, p_star, v_star)?;
        println!(
            "{p_opt:<6.2} {p_star:<6.2} {v_star:<4} {b1:<9.5} {b2:<9.5} {b:<9.5} {:?}",
            active_bound(k, n, p_opt, p_star, v_star)?
        );
    }

    println!();
    println!("horizon growth at p_opt = 0.01, p_star = 0.05:");
    for n in [500, 5_000, 50_000, 500_000] {
        println!("  N = {n:>7}: B = {:.5}", bound_b(k, n, 0.01, 0.05, 1)?);
    }

    println!();
    let base = bound_b(k, n, 0.01, 0.05, 1)?;
    println!("extensions on top of B = {base:.5}:");
    println!(
        "  labels delayed by at most 40 slots each: {:.5}",
        bound_delayed(base, &[40; 8], n, k)?
    );
    println!(
        "  labels observed with probability 0.5 (confidence 0.05, 500 observed errors): {:.5}",
        bound_missing(base, 0.5, 0.05, 500)?
    );
    println!(
        "  learners synchronized on 80% of slots: {:.5}",
        bound_async(base, 0.2)?
    );

    println!();
    println!("the confidence term shrinks with the observed-error count:");
    for z in [10, 100, 1_000, 10_000] {
        println!("  lambda(0.05, {z:>5}) = {:.5}", lambda_term(0.05, z)?);
    }
    match bound_missing(base, 0.1, 0.05, 20) {
        Err(e) => println!("too few observed errors for mu = 0.1: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
