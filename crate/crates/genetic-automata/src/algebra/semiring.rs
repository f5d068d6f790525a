//! Semiring carriers for automaton coefficients.
//!
//! A semiring is "a ring without minus": associative addition and
//! multiplication, commutative addition, an absorbing zero and a unit one.
//! Two instances are shipped, the boolean semiring ({0,1}, or, and) and the
//! real numbers under ordinary arithmetic; the trait is the extension point
//! for anything else.

use std::fmt::Debug;

/// Which shipped carrier a semiring value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiringKind {
    Boolean,
    Real,
}

/// Coefficient algebra for automata with multiplicities.
///
/// `add`/`mul` must be associative, `add` commutative, `zero` the additive
/// identity and multiplicatively absorbing, `one` the multiplicative
/// identity. These laws are exercised on sampled values in the tests rather
/// than assumed.
pub trait Semiring: Copy + PartialEq + Debug {
    const KIND: SemiringKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    /// Embedding into the reals used by vectorization and distances.
    fn to_real(&self) -> f64;

    /// Partial inverse of [`to_real`](Semiring::to_real); `None` when the
    /// real value has no preimage in the carrier.
    fn from_real(value: f64) -> Option<Self>;
}

impl Semiring for bool {
    const KIND: SemiringKind = SemiringKind::Boolean;

    fn zero() -> Self {
        false
    }

    fn one() -> Self {
        true
    }

    fn add(&self, other: &Self) -> Self {
        *self || *other
    }

    fn mul(&self, other: &Self) -> Self {
        *self && *other
    }

    fn to_real(&self) -> f64 {
        if *self {
            1.0
        } else {
            0.0
        }
    }

    fn from_real(value: f64) -> Option<Self> {
        if value == 0.0 {
            Some(false)
        } else if value == 1.0 {
            Some(true)
        } else {
            None
        }
    }
}

impl Semiring for f64 {
    const KIND: SemiringKind = SemiringKind::Real;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn to_real(&self) -> f64 {
        *self
    }

    fn from_real(value: f64) -> Option<Self> {
        Some(value)
    }
}
