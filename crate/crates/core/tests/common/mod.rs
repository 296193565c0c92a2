//! Seeded random generators shared by the property suites.
#![allow(dead_code)]

use num_bigint::BigInt;
use rand::Rng;

use diffeq_core::diffpoly::{DiffPoly, ShiftedVar, Witness};
use diffeq_core::field::{FieldElem, FieldKind, Rational};
use diffeq_core::monoid::{MonoidElem, MonoidKind, WindowSpec};

pub const ARITY: usize = 2;

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(BigInt::from(rng.gen_range(-5i64..=5)), BigInt::from(rng.gen_range(1i64..=3)))
}

/// An element small enough that products of three of them stay inside
/// [`window_for`].
pub fn small_elem(rng: &mut impl Rng, kind: MonoidKind) -> MonoidElem {
    match kind {
        MonoidKind::Nat => MonoidElem::Nat(rng.gen_range(0..=2)),
        MonoidKind::Int => MonoidElem::Int(rng.gen_range(-2..=2)),
        MonoidKind::Nat2 => MonoidElem::Nat2(rng.gen_range(0..=2), rng.gen_range(0..=2)),
        MonoidKind::Int2 => MonoidElem::Int2(rng.gen_range(-2..=2), rng.gen_range(-2..=2)),
        MonoidKind::FreeWord2 => {
            let len = rng.gen_range(0..=2);
            let w: String = (0..len).map(|_| if rng.gen_bool(0.5) { 'a' } else { 'b' }).collect();
            MonoidElem::Word(w)
        }
    }
}

pub fn window_for(kind: MonoidKind) -> WindowSpec {
    match kind {
        MonoidKind::Nat => WindowSpec::Nat { lo: 0, hi: 12 },
        MonoidKind::Int => WindowSpec::Int { lo: -8, hi: 8 },
        MonoidKind::Nat2 => WindowSpec::Nat2 { lo: [0, 0], hi: [6, 6] },
        MonoidKind::Int2 => WindowSpec::Int2 { lo: [-6, -6], hi: [6, 6] },
        MonoidKind::FreeWord2 => WindowSpec::FreeWord2 { max_len: 6 },
    }
}

pub fn random_poly(rng: &mut impl Rng, kind: MonoidKind) -> DiffPoly {
    let nterms = rng.gen_range(0..=3);
    let terms: Vec<_> = (0..nterms)
        .map(|_| {
            let nf = rng.gen_range(0..=2);
            let factors = (0..nf)
                .map(|_| {
                    let v = ShiftedVar::new(rng.gen_range(0..ARITY), small_elem(rng, kind));
                    (v, rng.gen_range(1..=2u32))
                })
                .collect();
            (factors, small_rational(rng))
        })
        .collect();
    DiffPoly::from_terms(kind, ARITY, terms).expect("valid terms")
}

pub fn random_witness(rng: &mut impl Rng, kind: MonoidKind) -> Witness {
    Witness::from_fn(window_for(kind), FieldKind::Q, ARITY, |_, _| {
        FieldElem::from_rational(FieldKind::Q, small_rational(rng))
    })
    .expect("complete witness")
}
