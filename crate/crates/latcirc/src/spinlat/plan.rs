//! The enumeration backend shared by all model families.
//!
//! Each model flattens itself into an [`OraclePlan`]: a count of free spins
//! plus a list of multiplicative interaction terms over slots that are either
//! free (an index into the configuration) or pinned to a value. Summing the
//! term products over every configuration of the free spins is the
//! brute-force partition function — deliberately simple machinery, built
//! straight from the model definition and independent of the circuit path it
//! is used to check.
//!
//! Configurations are indexed so that free spin 0 is the most significant
//! base-`q` digit; [`super::enumerate_configs`] yields them in increasing
//! index order.

use super::{EnumLimits, PartitionValue, Provenance, SpinlatError};
use crate::linalg::{C_ONE, C_ZERO};
use crate::par;
use num_complex::Complex64;

/// A spin position referenced by an interaction term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Free(usize),
    Pinned(u8),
}

impl Slot {
    fn value(&self, config: &[u8]) -> u8 {
        match self {
            Slot::Free(i) => config[*i],
            Slot::Pinned(v) => *v,
        }
    }
}

/// One multiplicative factor of a configuration weight.
#[derive(Debug, Clone)]
pub enum Term {
    /// `table[s_a]`, a per-site field or folded auxiliary contact.
    Single { a: Slot, table: Vec<Complex64> },
    /// `table[s_a · q + s_b]`, a pairwise edge weight.
    Pair { a: Slot, b: Slot, table: Vec<Complex64> },
    /// Rank-4 vertex weight `table[((s_i q + s_j) q + s_k) q + s_l]`.
    Quad { i: Slot, j: Slot, k: Slot, l: Slot, table: Vec<Complex64> },
    /// Z2 face weight by parity of the slot sum (plus `base` from pinned
    /// spins folded in): `even` on parity 0, `odd` on parity 1.
    Parity { slots: Vec<Slot>, base: u8, even: Complex64, odd: Complex64 },
    /// A constant factor (fully pinned interactions).
    Const(Complex64),
}

#[derive(Debug, Clone)]
pub struct OraclePlan {
    pub q: usize,
    pub free: usize,
    pub terms: Vec<Term>,
    /// Set when pinned boundary values contradict each other (a row whose
    /// left and right boundary spin coincide but is fixed to two different
    /// values); the partition function is exactly zero.
    pub contradictory: bool,
}

impl OraclePlan {
    pub fn weight(&self, config: &[u8]) -> Complex64 {
        if self.contradictory {
            return C_ZERO;
        }
        let q = self.q;
        let mut acc = C_ONE;
        for t in &self.terms {
            let f = match t {
                Term::Single { a, table } => table[a.value(config) as usize],
                Term::Pair { a, b, table } => {
                    table[a.value(config) as usize * q + b.value(config) as usize]
                }
                Term::Quad { i, j, k, l, table } => {
                    let idx = ((i.value(config) as usize * q + j.value(config) as usize) * q
                        + k.value(config) as usize)
                        * q
                        + l.value(config) as usize;
                    table[idx]
                }
                Term::Parity { slots, base, even, odd } => {
                    let mut p = *base;
                    for s in slots {
                        p ^= s.value(config) & 1;
                    }
                    if p & 1 == 0 {
                        *even
                    } else {
                        *odd
                    }
                }
                Term::Const(c) => *c,
            };
            if f == C_ZERO {
                return C_ZERO;
            }
            acc *= f;
        }
        acc
    }

    pub fn check_cap(&self, limits: &EnumLimits) -> Result<(), SpinlatError> {
        let cap = limits.cap(self.q);
        if self.free > cap {
            return Err(SpinlatError::EnumerationTooLarge { free_spins: self.free, cap });
        }
        Ok(())
    }

    pub fn config_count(&self) -> u64 {
        (self.q as u64).pow(self.free as u32)
    }

    fn decode(&self, mut index: u64, out: &mut [u8]) {
        for i in (0..self.free).rev() {
            out[i] = (index % self.q as u64) as u8;
            index /= self.q as u64;
        }
    }

    /// Sum every configuration weight; κ = 1 and provenance is the oracle.
    pub fn brute_force(&self, limits: &EnumLimits) -> Result<PartitionValue, SpinlatError> {
        self.check_cap(limits)?;
        let total = if self.contradictory {
            C_ZERO
        } else {
            par::complex_sum_indexed(self.config_count(), |idx| {
                let mut config = [0u8; 32];
                let config = &mut config[..self.free];
                self.decode(idx, config);
                self.weight(config)
            })
        };
        Ok(PartitionValue {
            z: total,
            kappa: C_ONE,
            provenance: Provenance::Oracle,
        })
    }

    /// Iterator over `(configuration, weight)` in index order.
    pub fn configs(self, limits: &EnumLimits) -> Result<ConfigIter, SpinlatError> {
        self.check_cap(limits)?;
        let count = self.config_count();
        Ok(ConfigIter { plan: self, next: 0, count })
    }
}

/// Yields every free-spin configuration with its total Boltzmann weight.
pub struct ConfigIter {
    plan: OraclePlan,
    next: u64,
    count: u64,
}

impl Iterator for ConfigIter {
    type Item = (Vec<u8>, Complex64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.count {
            return None;
        }
        let mut config = vec![0u8; self.plan.free];
        self.plan.decode(self.next, &mut config);
        let w = self.plan.weight(&config);
        self.next += 1;
        Some((config, w))
    }
}
