//! A field `k`, a Witt length `m` and everything derived from them.

use crate::error::{Error, Result};
use crate::ring_tower::{Beta, FFElem, FieldParams, FiniteField, Tower, Zq, ZqElem};
use crate::series::{PrecisionWindow, Series, SeriesRing};
use crate::witt::{WittRing, WittVec};

pub type KSeries = Series<FFElem>;
pub type ZSeries = Series<ZqElem>;
pub type KWitt = WittVec<KSeries>;

#[derive(Debug, Clone)]
pub struct Context {
    /// `Z_q` here has precision `m`.
    pub tower: Tower,
    pub m: usize,
}

impl Context {
    pub fn new(p: u64, d: usize, modulus: Option<Vec<u64>>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config("Witt length m must be >= 1".into()));
        }
        let params = match modulus {
            Some(f) => FieldParams::new(p, d, f, m as u32)?,
            None => FieldParams::with_default_modulus(p, d, m as u32)?,
        };
        Ok(Self { tower: Tower::new(params), m })
    }

    pub fn p(&self) -> u64 {
        self.tower.p()
    }

    pub fn d(&self) -> usize {
        self.tower.d()
    }

    pub fn k(&self) -> &FiniteField {
        &self.tower.k
    }

    /// `Z_q / p^m`.
    pub fn zq(&self) -> &Zq {
        &self.tower.zq
    }

    pub fn beta(&self) -> &Beta {
        &self.tower.beta
    }

    /// `p^m`.
    pub fn pm(&self) -> u64 {
        self.p().pow(self.m as u32)
    }

    /// `Z_q / p^n` over the same `k`.
    pub fn zq_with_prec(&self, n: u32) -> Result<Zq> {
        let mut params = self.tower.params.clone();
        params.zq_prec = n;
        let params = FieldParams::new(params.p, params.d, params.modulus, n)?;
        Ok(Zq::new(&params))
    }

    pub fn k_series(&self, window: PrecisionWindow) -> SeriesRing<FiniteField> {
        SeriesRing::new(self.k().clone(), window)
    }

    pub fn k_witt(&self, window: PrecisionWindow) -> WittRing<SeriesRing<FiniteField>> {
        WittRing::new(self.k_series(window), self.p(), self.m)
    }

    /// Reduce an integer to `[0, p^m)`.
    pub fn modpm(&self, n: i128) -> u64 {
        n.rem_euclid(self.pm() as i128) as u64
    }
}
