//! Upper bounds on the distillable coherence of i.i.d. copies of the qutrit
//! mixture: `4 I^SLD`, `4 I^{WYD,p}` for a few `p`, and the `p → 0` limit.
use asymrate::cli::figure1_rows;

fn main() -> asymrate::Result<()> {
    let q: Vec<f64> = (1..20).map(|k| k as f64 / 20.0).collect();
    println!("q,sld,wyd(0.4),wyd(0.1),wyd(0.01),limit");
    let cols: Vec<Vec<[f64; 4]>> = [0.4, 0.1, 0.01].iter().map(|&p| figure1_rows(&q, p)).collect::<Result<_, _>>()?;
    for ((r, b), c) in cols[0].iter().zip(&cols[1]).zip(&cols[2]) {
        println!("{:.2},{:.5},{:.5},{:.5},{:.5},{:.5}", r[0], r[1], r[2], b[2], c[2], r[3]);
    }
    Ok(())
}
