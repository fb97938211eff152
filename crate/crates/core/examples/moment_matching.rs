//! Closed-form matching: a half-t with given mean and sd, and the half-t /
//! Lomax that approximate half-normal / exponential scale mixtures.
//!
//! cargo run --example moment_matching

use hetprior::dist::{exp_mixture_lomax, half_t_moment_fit, scale_mixture_half_t};

fn main() -> hetprior::Result<()> {
    let fit = half_t_moment_fit(0.5, 0.4)?;
    println!("half-t with mean 0.5 and sd 0.4: {fit}");
    println!(
        "  check: mean {:.3}, sd {:.3}",
        fit.mean().unwrap(),
        fit.sd().unwrap()
    );

    // posterior of the half-normal scale summarized by its mean and sd
    let mixture = scale_mixture_half_t(0.22, 0.064)?;
    println!("half-normal mixture with scale 0.22 +/- 0.064: {mixture}");

    let lomax = exp_mixture_lomax(0.15, 0.05)?;
    println!("exponential mixture with scale 0.15 +/- 0.05: {lomax}");

    match half_t_moment_fit(1.0, 0.7) {
        Ok(d) => println!("unexpected fit {d}"),
        Err(e) => println!("cv below the half-normal limit: {e}"),
    }
    Ok(())
}
