//! Generalized Poisson sequences, their convolution inverses, and the max
//! and min quantum Fisher information of energy distributions.
use asymrate::reference::coherence_bit;
use asymrate::sequences::{
    convolve, default_lambda_cap, energy_distribution, f_max, f_min, inverse_sequence, poisson, poisson_to_tail,
    EnergyDistribution, IntSequence,
};
use asymrate::qfi;

fn main() -> asymrate::Result<()> {
    let a = convolve(&poisson_to_tail(0.7, 1e-14), &poisson_to_tail(1.3, 1e-14));
    let b = poisson_to_tail(2.0, 1e-14);
    let err = (0..=20).map(|n| (a.get(n) - b.get(n)).abs()).fold(0.0, f64::max);
    println!("P_0.7 * P_1.3 vs P_2: max diff {err:.2e}, tail bound {:.2e}", a.tail_bound);

    let inv = inverse_sequence(&poisson(1.5, 30), 30)?;
    let neg = poisson(-1.5, 30);
    let err = (0..=30).map(|n| (inv.get(n) - neg.get(n)).abs()).fold(0.0, f64::max);
    println!("inverse of P_1.5 vs P_-1.5: max diff {err:.2e}");

    let mu = 0.5;
    let p = EnergyDistribution::new(IntSequence::finite(0, poisson(mu, 60).values))?;
    let cap = default_lambda_cap(&p);
    println!("truncated P_{mu}: F_max {:?}, F_min {:.6}", f_max(&p, cap)?, f_min(&p, cap)?);

    let (phi, h) = coherence_bit();
    let p = energy_distribution(&phi, &h)?;
    let cap = default_lambda_cap(&p);
    println!("coherence bit: F {:.3}, F_max {:?}, F_min {:.2e}", qfi(&phi, &h)?, f_max(&p, cap)?, f_min(&p, cap)?);
    Ok(())
}
