//! The concrete maps: the colex enumerator `T_n`, the product map used for
//! Hilbert's tenth problem, and the algebraicity detector.

use itertools::Itertools;
use num_traits::Zero;

use super::{LocallyClosedPiece, PiecewiseError, PiecewiseMap};
use crate::field::Rational;
use crate::poly::Poly;

pub const DETECTOR_DIM: usize = 5;

fn x(i: usize) -> Poly {
    Poly::var(i - 1)
}

fn diff(i: usize, j: usize) -> Poly {
    &x(i) - &x(j)
}

/// Map whose orbit of the origin lists all nondecreasing `n`-tuples of
/// naturals in ascending colex order.
///
/// Piece `r < n` is `x₁ = … = x_r ≠ x_{r+1}`, sending the tuple to
/// `(0, …, 0, x_r + 1, x_{r+1}, …, x_n)`; piece `n` is `x₁ = … = x_n`,
/// sending it to `(0, …, 0, x_n + 1)`.
pub fn tn_map(n: usize) -> PiecewiseMap {
    assert!(n >= 1, "tn_map needs n >= 1");
    let mut pieces = Vec::with_capacity(n);
    for r in 1..=n {
        let w: Vec<Poly> = (1..r).map(|i| diff(i, i + 1)).collect();
        let w_prime: Vec<Poly> = if r < n { (1..=r).map(|i| diff(i, i + 1)).collect() } else { Vec::new() };
        let q: Vec<Poly> = (1..=n)
            .map(|i| match i.cmp(&r) {
                std::cmp::Ordering::Less => Poly::zero(),
                std::cmp::Ordering::Equal => &x(i) + &Poly::one(),
                std::cmp::Ordering::Greater => x(i),
            })
            .collect();
        pieces.push(LocallyClosedPiece { w, w_prime, q });
    }
    PiecewiseMap::new(n, pieces).expect("tn_map pieces are well formed")
}

/// The five-dimensional map `(C, N, R, A, P)` whose fifth coordinate runs
/// through `P_N(c)` for all `N`.
pub fn detector_map() -> PiecewiseMap {
    let q_of = |h: &Poly| &(h * &(h - &Poly::int(1))) * &(h - &Poly::int(2));
    let d = &x(3) - &x(4).scale(&Rational::from_integer(3.into()));
    let p = |polys: [Poly; 5]| polys.to_vec();
    let pieces = vec![
        // x3 = 0: start the next N
        LocallyClosedPiece {
            w: vec![x(3)],
            w_prime: vec![],
            q: p([x(1), &x(2) + &Poly::one(), &x(2) + &Poly::one(), Poly::zero(), Poly::one()]),
        },
        // x3 != 0 and Q(x3 - 3x4) != 0: keep searching for the quotient
        LocallyClosedPiece {
            w: vec![],
            w_prime: vec![&x(3) * &q_of(&d)],
            q: p([x(1), x(2), x(3), &x(4) + &Poly::one(), x(5)]),
        },
        // digit 0
        LocallyClosedPiece {
            w: vec![d.clone()],
            w_prime: vec![x(3)],
            q: p([x(1), x(2), x(4), Poly::zero(), &x(5) * &x(1)]),
        },
        // digit 1
        LocallyClosedPiece {
            w: vec![&d - &Poly::int(1)],
            w_prime: vec![x(3)],
            q: p([x(1), x(2), x(4), Poly::zero(), -&(&x(5) * &x(1))]),
        },
        // digit 2
        LocallyClosedPiece {
            w: vec![&d - &Poly::int(2)],
            w_prime: vec![x(3)],
            q: p([x(1), x(2), x(4), Poly::zero(), &x(5) + &Poly::one()]),
        },
    ];
    PiecewiseMap::new(DETECTOR_DIM, pieces).expect("detector pieces are well formed")
}

/// Product map on `(𝔸ⁿ)^{n!} × 𝔸¹`: one copy of `tn_map(n)` conjugated by each
/// permutation, and a last coordinate `∏_π P(x_π)`.
///
/// Blocks follow the lexicographic order of permutations of `0..n`; the
/// pieces are the common refinement of the blocks' pieces.
pub fn hilbert10_map(p: &Poly) -> Result<PiecewiseMap, PiecewiseError> {
    let n = p.nvars().max(1);
    if !p.constant_term().is_integer() || !p.has_integer_coeffs() {
        return Err(PiecewiseError::Invalid(format!("{p} must have integer coefficients")));
    }
    if p.constant_term().is_zero() {
        return Err(PiecewiseError::Invalid(format!("{p} vanishes at the origin")));
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let dim = n * perms.len() + 1;
    let base = tn_map(n);

    // For block b with permutation π, p_π(y) has coordinate π(i) equal to
    // p_i(y_{π(1)}, …, y_{π(n)}); y lives at offset b·n of the big space.
    let block_pieces: Vec<Vec<LocallyClosedPiece>> = perms
        .iter()
        .enumerate()
        .map(|(b, pi)| {
            let images: Vec<Poly> = pi.iter().map(|&k| Poly::var(b * n + k)).collect();
            base.pieces()
                .iter()
                .map(|piece| {
                    let conj = |h: &Poly| h.compose(&images);
                    let mut q = vec![Poly::zero(); n];
                    for (i, qi) in piece.q.iter().enumerate() {
                        q[pi[i]] = conj(qi);
                    }
                    LocallyClosedPiece {
                        w: piece.w.iter().map(conj).collect(),
                        w_prime: piece.w_prime.iter().map(conj).collect(),
                        q,
                    }
                })
                .collect()
        })
        .collect();

    let last = perms.iter().enumerate().fold(Poly::one(), |acc, (b, _)| {
        let block: Vec<Poly> = (0..n).map(|k| Poly::var(b * n + k)).collect();
        &acc * &p.compose(&block)
    });

    let mut pieces = Vec::new();
    for choice in block_pieces.iter().map(|v| v.iter()).multi_cartesian_product() {
        let mut w = Vec::new();
        let mut w_prime: Option<Vec<Poly>> = None;
        let mut q = Vec::with_capacity(dim);
        for piece in &choice {
            w.extend(piece.w.iter().cloned());
            q.extend(piece.q.iter().cloned());
            // V(A) ∪ V(B) = V(ab : a ∈ A, b ∈ B); an empty list is the empty set
            if !piece.w_prime.is_empty() {
                w_prime = Some(match w_prime {
                    None => piece.w_prime.clone(),
                    Some(acc) => acc
                        .iter()
                        .cartesian_product(&piece.w_prime)
                        .map(|(a, b)| a * b)
                        .collect(),
                });
            }
        }
        q.push(last.clone());
        pieces.push(LocallyClosedPiece {
            w,
            w_prime: w_prime.unwrap_or_default(),
            q,
        });
    }
    PiecewiseMap::new(dim, pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldElem, FieldKind};
    use crate::piecewise::parse_point;

    fn ints(p: &[FieldElem]) -> Vec<i64> {
        p.iter().map(|v| v.as_integer().unwrap().try_into().unwrap()).collect()
    }

    #[test]
    fn t1_counts() {
        let t = tn_map(1).iterate(&parse_point(FieldKind::Q, "0").unwrap(), 4).unwrap();
        let got: Vec<i64> = t.points.iter().map(|p| ints(p)[0]).collect();
        assert_eq!(got, [0, 1, 2, 3, 4]);
    }

    #[test]
    fn t2_prefix() {
        let t = tn_map(2).iterate(&parse_point(FieldKind::Q, "0,0").unwrap(), 6).unwrap();
        let got: Vec<Vec<i64>> = t.points.iter().map(|p| ints(p)).collect();
        let want = [[0, 0], [0, 1], [1, 1], [0, 2], [1, 2], [2, 2], [0, 3]];
        assert_eq!(got, want.iter().map(|p| p.to_vec()).collect::<Vec<_>>());
    }

    #[test]
    fn t3_resets_lower_coordinates() {
        let map = tn_map(3);
        let (_, y) = map.step(&parse_point(FieldKind::Q, "1,1,2").unwrap()).unwrap();
        assert_eq!(ints(&y), [0, 2, 2]);
    }

    #[test]
    fn detector_branches() {
        let map = detector_map();
        let qt = parse_point(FieldKind::Qt, "t,1,1,0,1").unwrap();
        assert_eq!(map.classify(&qt).unwrap(), 3);
        let start = parse_point(FieldKind::Q, "1/2,0,0,0,1").unwrap();
        assert_eq!(map.classify(&start).unwrap(), 0);
    }

    #[test]
    fn hilbert_dimension() {
        let m = hilbert10_map(&Poly::parse("t1+t2+1").unwrap()).unwrap();
        assert_eq!(m.dim(), 5);
        assert_eq!(m.pieces().len(), 4);
        let m1 = hilbert10_map(&Poly::parse("t1-2").unwrap()).unwrap();
        assert_eq!(m1.dim(), 2);
        assert!(hilbert10_map(&Poly::parse("t1*t2").unwrap()).is_err());
    }
}
