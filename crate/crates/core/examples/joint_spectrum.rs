//! Joint spectrum of (T_{s_1^z}, …, T_{s_n^z}) with s_j = e^{-q_j β}: relation
//! lattice, period and membership of phase vectors.

use compsemi::spectra::{
    brute_force_distance, classify_joint_spectrum, curve_phases, joint_membership, relation_lattice, ExponentTuple,
};
use num_rational::Rational64;

fn main() -> compsemi::Result<()> {
    let q = vec![Rational64::from_integer(1), Rational64::new(3, 2)];
    let t = ExponentTuple::new(1.0, q)?;
    let lattice = relation_lattice(&t);
    let shape = classify_joint_spectrum(&t);
    println!("lattice basis {:?}", lattice.basis);
    println!("{}", serde_json::to_string(&shape).expect("shape serializes"));

    let on_curve = curve_phases(&t, 2.7);
    let off_curve = vec![0.3, 0.1];
    for theta in [on_curve, off_curve] {
        let member = joint_membership(&t, &theta, 1e-9)?;
        let dist = brute_force_distance(&t, &theta, shape.period.unwrap_or(100.0), 1e-3)?;
        println!("theta {theta:.4?}: member={member} distance to curve {dist:.2e}");
    }

    let t3 = ExponentTuple::new(0.5, vec![1.into(), 2.into(), 3.into()])?;
    println!("q=(1,2,3): {:?}", relation_lattice(&t3).basis);
    Ok(())
}
