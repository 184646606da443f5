use serde::{Deserialize, Serialize};

use super::splitmix::{below, table_word, DOMAIN_ENTRY, DOMAIN_SHUFFLE};
use super::{CodecError, CodecParams};
use crate::bits::{width_mask, PacketIndexSet, StateWord};

/// How the entries of a transition table are drawn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TableMode {
    /// Every entry is an independent uniform state word.
    Random,
    /// The bits at `subset` form a uniform permutation of the block values,
    /// so the packets at `subset` alone decode without search. The remaining
    /// bits are uniform.
    Permutation(PacketIndexSet),
}

/// The transition function `f_s`: one array of `2^{N_s}` state words per phase.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionTable {
    state_width: u8,
    phases: Vec<Vec<u64>>,
    mode: Option<TableMode>,
}

impl TransitionTable {
    /// Deterministic table for `params` (seed, `N_s`, `W_s`) in the given mode.
    pub fn build(params: &CodecParams, mode: TableMode) -> Result<Self, CodecError> {
        let width = params.state_width();
        let mask = width_mask(width);
        let seed = params.seed();
        if let TableMode::Permutation(subset) = &mode {
            subset.check_width(width)?;
        }
        let mut phases = Vec::with_capacity(params.phase_bits().len());
        for (s, &bits) in params.phase_bits().iter().enumerate() {
            let size = 1usize << bits;
            let phase = s as u64;
            let mut entries: Vec<u64> = (0..size as u64)
                .map(|x| table_word(seed, DOMAIN_ENTRY, phase, x) & mask)
                .collect();
            if let TableMode::Permutation(subset) = &mode {
                if subset.len() != usize::from(bits) {
                    return Err(CodecError::PermutationSubset {
                        phase: s as u8,
                        expected: bits,
                        got: subset.len(),
                    });
                }
                let perm = seeded_permutation(seed, phase, size);
                let keep = !subset.mask();
                for (entry, &p) in entries.iter_mut().zip(&perm) {
                    *entry = (*entry & keep) | subset.deposit_raw(p);
                }
            }
            phases.push(entries);
        }
        Ok(Self {
            state_width: width,
            phases,
            mode: Some(mode),
        })
    }

    /// Table from explicit entries, one vector per phase; each length must be a power of two.
    pub fn from_entries(state_width: u8, phases: Vec<Vec<u64>>) -> Result<Self, CodecError> {
        StateWord::zero(state_width)?;
        if phases.is_empty() {
            return Err(CodecError::TableMismatch("no phases".into()));
        }
        for (s, entries) in phases.iter().enumerate() {
            if !entries.len().is_power_of_two() || entries.len() < 2 {
                return Err(CodecError::TableMismatch(format!(
                    "phase {s} has {} entries, expected a power of two >= 2",
                    entries.len()
                )));
            }
            for &e in entries {
                StateWord::new(e, state_width)?;
            }
        }
        Ok(Self {
            state_width,
            phases,
            mode: None,
        })
    }

    #[inline]
    pub fn state_width(&self) -> u8 {
        self.state_width
    }

    #[inline]
    pub fn phases(&self) -> usize {
        self.phases.len()
    }

    /// Raw entries of phase `s`.
    #[inline]
    pub fn phase(&self, s: usize) -> &[u64] {
        &self.phases[s]
    }

    /// `N_s` of phase `s`.
    pub fn phase_bits(&self, s: usize) -> u8 {
        self.phases[s].len().trailing_zeros() as u8
    }

    pub fn entry(&self, s: usize, x: usize) -> StateWord {
        StateWord::new(self.phases[s][x], self.state_width).expect("entries fit the state width")
    }

    /// `None` for tables built with [`TransitionTable::from_entries`].
    pub fn mode(&self) -> Option<&TableMode> {
        self.mode.as_ref()
    }

    /// Checks the table was built for the same `W_s` and phase split as `params`.
    pub fn check_params(&self, params: &CodecParams) -> Result<(), CodecError> {
        let bits: Vec<u8> = (0..self.phases()).map(|s| self.phase_bits(s)).collect();
        if self.state_width != params.state_width() || bits != params.phase_bits() {
            return Err(CodecError::TableMismatch(format!(
                "table is W_s={} N_s={:?}, params are W_s={} N_s={:?}",
                self.state_width,
                bits,
                params.state_width(),
                params.phase_bits()
            )));
        }
        Ok(())
    }

    /// Whether `x -> extract(f_s[x], which)` is injective, i.e. straightforward decoding applies.
    pub fn is_injective_on(&self, s: usize, which: &PacketIndexSet) -> bool {
        let m = which.len();
        if m < usize::from(self.phase_bits(s)) {
            return false;
        }
        let mut seen = std::collections::HashSet::with_capacity(self.phases[s].len());
        self.phases[s]
            .iter()
            .all(|&e| seen.insert(which.extract_raw(e)))
    }
}

/// Fisher-Yates shuffle of `0..size` driven by the shuffle domain of the generator.
fn seeded_permutation(seed: u64, phase: u64, size: usize) -> Vec<u64> {
    let mut perm: Vec<u64> = (0..size as u64).collect();
    for i in (1..size).rev() {
        let j = below(
            table_word(seed, DOMAIN_SHUFFLE, phase, i as u64),
            i as u64 + 1,
        ) as usize;
        perm.swap(i, j);
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::extract;

    #[test]
    fn same_inputs_same_table() {
        let p = CodecParams::new(6, 64).unwrap().with_seed(99);
        let a = TransitionTable::build(&p, TableMode::Random).unwrap();
        let b = TransitionTable::build(&p, TableMode::Random).unwrap();
        assert_eq!(a, b);
        let c = TransitionTable::build(&p.clone().with_seed(100), TableMode::Random).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn small_random_table_shape() {
        let p = CodecParams::new(2, 5).unwrap().with_seed(7);
        let t = TransitionTable::build(&p, TableMode::Random).unwrap();
        assert_eq!(t.phase(0).len(), 4);
        assert!(t.phase(0).iter().all(|&e| e < 32));
    }

    #[test]
    fn permutation_mode_is_bijective_on_subset() {
        let subset = PacketIndexSet::new(vec![3, 9, 17, 20, 33, 40, 51, 62]).unwrap();
        for seed in 0..5 {
            let p = CodecParams::new(8, 64).unwrap().with_seed(seed);
            let t = TransitionTable::build(&p, TableMode::Permutation(subset.clone())).unwrap();
            let mut seen = vec![false; 256];
            for x in 0..256 {
                let z = extract(t.entry(0, x), &subset).unwrap().value() as usize;
                assert!(!seen[z]);
                seen[z] = true;
            }
            assert!(t.is_injective_on(0, &subset));
        }
    }

    #[test]
    fn permutation_mode_checks_subset_size() {
        let p = CodecParams::new(8, 64).unwrap();
        let subset = PacketIndexSet::first(7).unwrap();
        assert!(matches!(
            TransitionTable::build(&p, TableMode::Permutation(subset)),
            Err(CodecError::PermutationSubset {
                expected: 8,
                got: 7,
                ..
            })
        ));
    }

    #[test]
    fn phases_get_distinct_tables() {
        let p = CodecParams::new(8, 64).unwrap().with_phases(2).unwrap();
        let t = TransitionTable::build(&p, TableMode::Random).unwrap();
        assert_eq!(t.phases(), 2);
        assert_ne!(t.phase(0), t.phase(1));
        t.check_params(&p).unwrap();
        assert!(t.check_params(&CodecParams::new(8, 64).unwrap()).is_err());
    }

    #[test]
    fn explicit_entries_validated() {
        assert!(TransitionTable::from_entries(5, vec![vec![0, 1, 2]]).is_err());
        assert!(TransitionTable::from_entries(5, vec![vec![0, 32]]).is_err());
        let t = TransitionTable::from_entries(5, vec![vec![1, 2, 3, 4]]).unwrap();
        assert_eq!(t.phase_bits(0), 2);
        assert!(t.mode().is_none());
    }
}
