//! Random covariant channels from an energy-preserving Stinespring
//! isometry: covariance residual of the Choi matrix, monotonicity of skew
//! information, and a Kraus JSON round trip.
use asymrate::channels::{is_covariant, random_covariant_channel, random_unitary_channel, read_kraus_json, write_kraus_json};
use asymrate::operator::HermitianOperator;
use asymrate::random::{random_mixed_state, seeded_rng};
use asymrate::{skew_info, MonotoneFunction};

fn main() -> asymrate::Result<()> {
    let h_in = HermitianOperator::from_real_diagonal(&[0.0, 1.0, 2.0]);
    let h_out = HermitianOperator::from_real_diagonal(&[0.0, 1.0]);
    let f = MonotoneFunction::sld();
    let mut rng = seeded_rng(3);
    for seed in 0..5 {
        let ch = random_covariant_channel(&h_in, &h_out, 2, seed)?;
        let rho = random_mixed_state(3, &mut rng);
        let before = skew_info(&rho, &h_in, &f)?.value;
        let after = skew_info(&ch.apply(&rho)?, &h_out, &f)?.value;
        let cov = is_covariant(&ch, &h_in, &h_out, 1e-9)?;
        println!(
            "seed {seed}: {} Kraus operators, residual {:.2e}, I before {before:.5} after {after:.5}",
            ch.kraus().len(),
            cov.residual
        );
    }
    let u = random_unitary_channel(3, 1);
    println!("generic unitary covariant: {}", is_covariant(&u, &h_in, &h_in, 1e-9)?.covariant);

    let ch = random_covariant_channel(&h_in, &h_out, 2, 0)?;
    let mut buf = Vec::new();
    write_kraus_json(&ch, &mut buf)?;
    let back = read_kraus_json(buf.as_slice())?;
    println!("Kraus JSON round trip: {} bytes, completeness {:.1e}", buf.len(), back.completeness_deviation());
    Ok(())
}
