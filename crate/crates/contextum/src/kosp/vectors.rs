use std::collections::BTreeSet;

use crate::operational::{Verdict, Witness};
use crate::rational::Rational;

use super::Error;

/// A set of rational vectors with designated complete orthogonal bases. The
/// sum rule for rank-1 projections turns into a coloring problem: mark each
/// vector 0 or 1 so that every basis carries exactly one 1 and no two
/// orthogonal vectors are both 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorScenario {
    pub dim: usize,
    pub vectors: Vec<Vec<Rational>>,
    pub bases: Vec<Vec<usize>>,
}

fn inner_product(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact determinant by fraction-free Gaussian elimination; used for the
/// completeness (spanning) certificate of each basis.
fn determinant(matrix: &mut Vec<Vec<Rational>>) -> Rational {
    let n = matrix.len();
    let mut det = Rational::one();
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !matrix[r][col].is_zero()) {
            Some(r) => r,
            None => return Rational::zero(),
        };
        if pivot_row != col {
            matrix.swap(pivot_row, col);
            det = -det;
        }
        let pivot = matrix[col][col].clone();
        det = det * &pivot;
        for row in (col + 1)..n {
            if matrix[row][col].is_zero() {
                continue;
            }
            let factor = &matrix[row][col] / &pivot;
            for k in col..n {
                let delta = &factor * &matrix[col][k];
                matrix[row][k] = &matrix[row][k] - &delta;
            }
        }
    }
    det
}

/// Validates a vector scenario: uniform dimension, nonzero vectors, and for
/// every listed basis exact orthogonality, `dim` distinct members, and a
/// nonzero Gram determinant (spanning).
pub fn validate_vectors(vs: &VectorScenario) -> Verdict {
    let mut witnesses = Vec::new();
    for (i, v) in vs.vectors.iter().enumerate() {
        if v.len() != vs.dim {
            witnesses.push(Witness::new("vector has the wrong dimension").outcome(&i.to_string()));
        }
        if v.iter().all(|x| x.is_zero()) {
            witnesses.push(Witness::new("zero vector").outcome(&i.to_string()));
        }
    }
    if !witnesses.is_empty() {
        return Verdict::from_witnesses(witnesses, Vec::new());
    }
    for (b, basis) in vs.bases.iter().enumerate() {
        let label = format!("basis {b}");
        if basis.len() != vs.dim {
            witnesses.push(
                Witness::new("basis does not have dim members").outcome(&label),
            );
            continue;
        }
        let distinct: BTreeSet<usize> = basis.iter().copied().collect();
        if distinct.len() != basis.len() {
            witnesses.push(Witness::new("basis repeats a vector").outcome(&label));
            continue;
        }
        if basis.iter().any(|&i| i >= vs.vectors.len()) {
            witnesses.push(Witness::new("basis references unknown vector").outcome(&label));
            continue;
        }
        for (k, &i) in basis.iter().enumerate() {
            for &j in &basis[k + 1..] {
                if !inner_product(&vs.vectors[i], &vs.vectors[j]).is_zero() {
                    witnesses.push(
                        Witness::new("basis vectors are not orthogonal")
                            .outcome(&format!("{label}: vectors {i},{j}")),
                    );
                }
            }
        }
        let mut gram: Vec<Vec<Rational>> = basis
            .iter()
            .map(|&i| {
                basis
                    .iter()
                    .map(|&j| inner_product(&vs.vectors[i], &vs.vectors[j]))
                    .collect()
            })
            .collect();
        if determinant(&mut gram).is_zero() {
            witnesses.push(
                Witness::new("basis Gram determinant vanishes (not spanning)").outcome(&label),
            );
        }
    }
    Verdict::from_witnesses(witnesses, Vec::new())
}

/// Exhaustively enumerates the {0,1} colorings in which every listed basis
/// has exactly one vector colored 1 and no two orthogonal vectors (whether or
/// not they share a basis) are both colored 1. Colorings are returned as bool
/// vectors aligned with `vs.vectors`, in lexicographic order.
pub fn color_vectors(vs: &VectorScenario, cap: u64) -> Result<Vec<Vec<bool>>, Error> {
    let verdict = validate_vectors(vs);
    if !verdict.holds {
        return Err(Error::Invalid {
            kind: "vector scenario",
            verdict,
        });
    }
    let n = vs.vectors.len();
    let candidates = (1u128) << n.min(127);
    if n >= 127 || candidates > cap as u128 {
        return Err(Error::Capacity(candidates, cap));
    }

    // Orthogonality graph over all pairs.
    let mut orthogonal: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if inner_product(&vs.vectors[i], &vs.vectors[j]).is_zero() {
                orthogonal[i].push(j);
                orthogonal[j].push(i);
            }
        }
    }
    // Bases are checked for "exactly one" as soon as their last vector is
    // assigned.
    let bases_ending_at: Vec<Vec<usize>> = {
        let mut v = vec![Vec::new(); n];
        for (b, basis) in vs.bases.iter().enumerate() {
            if let Some(&last) = basis.iter().max() {
                v[last].push(b);
            }
        }
        v
    };

    let mut colors = vec![false; n];
    let mut results = Vec::new();
    color_rec(
        vs,
        &orthogonal,
        &bases_ending_at,
        0,
        &mut colors,
        &mut results,
    );
    Ok(results)
}

fn color_rec(
    vs: &VectorScenario,
    orthogonal: &[Vec<usize>],
    bases_ending_at: &[Vec<usize>],
    index: usize,
    colors: &mut Vec<bool>,
    results: &mut Vec<Vec<bool>>,
) {
    if index == vs.vectors.len() {
        results.push(colors.clone());
        return;
    }
    'choice: for value in [false, true] {
        if value && orthogonal[index].iter().any(|&j| j < index && colors[j]) {
            continue;
        }
        colors[index] = value;
        for &b in &bases_ending_at[index] {
            let ones = vs.bases[b].iter().filter(|&&i| colors[i]).count();
            if ones != 1 {
                colors[index] = false;
                continue 'choice;
            }
        }
        color_rec(vs, orthogonal, bases_ending_at, index + 1, colors, results);
        colors[index] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_vectors(dim: usize) -> Vec<Vec<Rational>> {
        (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn two_dimensional_basis_has_two_colorings() {
        let vs = VectorScenario {
            dim: 2,
            vectors: basis_vectors(2),
            bases: vec![vec![0, 1]],
        };
        let colorings = color_vectors(&vs, 1 << 20).unwrap();
        assert_eq!(colorings, vec![vec![false, true], vec![true, false]]);
    }

    #[test]
    fn three_dimensional_basis_has_three_colorings() {
        let vs = VectorScenario {
            dim: 3,
            vectors: basis_vectors(3),
            bases: vec![vec![0, 1, 2]],
        };
        assert_eq!(color_vectors(&vs, 1 << 20).unwrap().len(), 3);
    }

    #[test]
    fn cross_basis_orthogonality_is_enforced() {
        // e1, e2, and e2 again under a different index: the duplicate is
        // orthogonal to e1 only, but equal vectors are not orthogonal, so
        // colorings may set both copies of e2.
        let mut vectors = basis_vectors(2);
        vectors.push(vectors[1].clone());
        let vs = VectorScenario {
            dim: 2,
            vectors,
            bases: vec![vec![0, 1]],
        };
        let colorings = color_vectors(&vs, 1 << 20).unwrap();
        // (0,1,0), (0,1,1), (1,0,0): the third vector is orthogonal to e1,
        // so (1,0,1) is excluded.
        assert_eq!(colorings.len(), 3);
        assert!(!colorings.contains(&vec![true, false, true]));
    }

    #[test]
    fn validation_rejects_non_orthogonal_basis() {
        let vs = VectorScenario {
            dim: 2,
            vectors: vec![
                vec![Rational::one(), Rational::zero()],
                vec![Rational::one(), Rational::one()],
            ],
            bases: vec![vec![0, 1]],
        };
        let verdict = validate_vectors(&vs);
        assert!(!verdict.holds);
    }

    #[test]
    fn capacity_cap_applies() {
        let vs = VectorScenario {
            dim: 2,
            vectors: basis_vectors(2),
            bases: vec![vec![0, 1]],
        };
        assert!(matches!(color_vectors(&vs, 2), Err(Error::Capacity(4, 2))));
    }
}
