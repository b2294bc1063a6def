//! The minimal commutative-ring interface shared by every coefficient ring
//! in the crate.
//!
//! Rings are context objects: elements are plain data and every operation
//! goes through the ring, so the same Witt-vector and series code runs over
//! `k`, over `Z_q / p^N`, and over Laurent series with either coefficient
//! ring.

use std::fmt::Debug;

use num_bigint::BigInt;

pub trait Ring: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Image of an integer under the structure map `Z -> R`.
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;

    /// Multiplicative inverse, when it exists and the ring can compute it.
    fn inv(&self, _a: &Self::Elem) -> Option<Self::Elem> {
        None
    }

    /// `Some(p)` when the ring has prime characteristic `p`.
    fn char_p(&self) -> Option<u64> {
        None
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(n))
    }

    fn mul_int(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_i64(n))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}
