//! Exact Born-rule tables for the Peres-Mermin measurements in three
//! preparations, and the non-disturbance check.

use std::collections::BTreeSet;

use contextum::catalog;
use contextum::operational::{check_nondisturbance, validate_theory};
use contextum::quantum::{generate_theory, DensityOperator, GaussianRational, Matrix};
use contextum::rational::Rational;

fn main() {
    let mut rep = catalog::peres_mermin_representation();

    // |00>, and the maximally entangled state (both have rational density
    // matrices, so everything stays exact).
    let ket00 = DensityOperator::pure(&[
        GaussianRational::one(),
        GaussianRational::zero(),
        GaussianRational::zero(),
        GaussianRational::zero(),
    ])
    .unwrap();
    let bell = DensityOperator::from_projection(
        Matrix::from_int_rows(&[&[1, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 1]])
            .scale(&Rational::new(1, 2)),
    )
    .unwrap();
    rep.states.insert("zero_zero".to_string(), ket00);
    rep.states.insert("bell".to_string(), bell);

    let theory = generate_theory(&rep).unwrap();
    assert!(validate_theory(&theory).holds);

    println!("Singleton statistics p(+1 | m, preparation):");
    print!("{:>12}", "");
    for prep in &theory.skeleton.preparations {
        print!("{prep:>12}");
    }
    println!();
    for m in ["A11", "A13", "A23", "A33"] {
        print!("{m:>12}");
        let members: BTreeSet<String> = BTreeSet::from([m.to_string()]);
        for prep in &theory.skeleton.preparations {
            let table = theory.table(&members, prep).unwrap();
            print!("{:>12}", table.weight(&vec!["1".to_string()]).to_string());
        }
        println!();
    }
    println!();

    println!("Joint statistics of the first row at the Bell state:");
    let row: BTreeSet<String> = ["A11", "A12", "A13"].iter().map(|s| s.to_string()).collect();
    let table = theory.table(&row, "bell").unwrap();
    for (outcome, weight) in table.weights() {
        println!("    ({}) -> {weight}", outcome.join(","));
    }
    println!();

    let verdict = check_nondisturbance(&theory);
    println!(
        "Non-disturbance (every subset table equals every superset marginal, exactly): {verdict}"
    );
}
