//! Promise-respecting problem instances: two-to-one functions with a hidden
//! shift, periodic functions with a hidden period, and the exact classical
//! oracles (orthogonal subgroup, good-outcome set) the tests compare against.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qops::{dot, BitString};

/// Explicit lookup table for a function between two power-of-two index sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTable {
    domain_bits: u32,
    codomain_bits: u32,
    values: Vec<u64>,
}

impl FunctionTable {
    pub fn new(domain_bits: u32, codomain_bits: u32, values: Vec<u64>) -> Result<Self> {
        if domain_bits == 0 || domain_bits > 30 || codomain_bits == 0 || codomain_bits > 30 {
            return Err(Error::TableMismatch {
                reason: format!("unsupported register widths ({domain_bits}, {codomain_bits})"),
            });
        }
        if values.len() != 1 << domain_bits {
            return Err(Error::TableMismatch {
                reason: format!(
                    "table has {} entries, domain needs {}",
                    values.len(),
                    1u64 << domain_bits
                ),
            });
        }
        if let Some(v) = values.iter().find(|v| **v >> codomain_bits != 0) {
            return Err(Error::TableMismatch {
                reason: format!("value {v} does not fit in {codomain_bits} bits"),
            });
        }
        Ok(FunctionTable {
            domain_bits,
            codomain_bits,
            values,
        })
    }

    pub fn domain_bits(&self) -> u32 {
        self.domain_bits
    }

    pub fn codomain_bits(&self) -> u32 {
        self.codomain_bits
    }

    pub fn domain_size(&self) -> u64 {
        1 << self.domain_bits
    }

    pub fn value(&self, x: u64) -> u64 {
        self.values[x as usize]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Stable 64-bit content hash (FNV-1a over the shape and values), used to
    /// tag reports with the exact instance they ran against.
    pub fn content_hash(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |v: u64| {
            for byte in v.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        eat(self.domain_bits as u64);
        eat(self.codomain_bits as u64);
        for &v in &self.values {
            eat(v);
        }
        h
    }
}

/// A two-to-one function whose collision structure hides a nonzero shift `h`:
/// `f(x) = f(y)` exactly when `x xor y` is `0` or `h`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimonInstance {
    n: u32,
    h: BitString,
    f: FunctionTable,
}

impl SimonInstance {
    /// Validates the two-to-one promise exhaustively (quadratic in the domain,
    /// fine for the widths this crate supports).
    pub fn new(n: u32, h: BitString, f: FunctionTable) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInstance {
                reason: "hidden-shift instances need at least 2 bits".into(),
            });
        }
        if h.width() != n || f.domain_bits() != n || f.codomain_bits() != n {
            return Err(Error::InvalidInstance {
                reason: "instance widths are inconsistent".into(),
            });
        }
        if h.is_zero() {
            return Err(Error::TrivialShift);
        }
        let size = 1u64 << n;
        for x in 0..size {
            for y in x..size {
                let collide = f.value(x) == f.value(y);
                let related = x == y || (x ^ y) == h.value();
                if collide != related {
                    return Err(Error::InvalidInstance {
                        reason: format!(
                            "two-to-one promise violated at ({x}, {y}): f(x)={}, f(y)={}",
                            f.value(x),
                            f.value(y)
                        ),
                    });
                }
            }
        }
        Ok(SimonInstance { n, h, f })
    }

    /// Recovers the shift from a bare table by locating the collision of 0.
    pub fn from_table(f: FunctionTable) -> Result<Self> {
        let n = f.domain_bits();
        let h = (1..f.domain_size())
            .find(|&x| f.value(x) == f.value(0))
            .ok_or_else(|| Error::InvalidInstance {
                reason: "table has no collision with 0, so it hides no shift".into(),
            })?;
        SimonInstance::new(n, BitString::new(n, h)?, f)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn hidden_shift(&self) -> BitString {
        self.h
    }

    pub fn f(&self) -> &FunctionTable {
        &self.f
    }

    pub fn id(&self) -> String {
        format!("simon-n{}-h{}-{:08x}", self.n, self.h, self.f.content_hash() as u32)
    }
}

/// Builds a two-to-one instance by assigning a distinct random codomain value
/// to each coset `{x, x xor h}`.
pub fn make_simon<R: Rng>(n: u32, h: Option<BitString>, rng: &mut R) -> Result<SimonInstance> {
    if n < 2 {
        return Err(Error::InvalidInstance {
            reason: "hidden-shift instances need at least 2 bits".into(),
        });
    }
    let h = match h {
        Some(h) => {
            if h.width() != n {
                return Err(Error::WidthMismatch {
                    expected: n,
                    actual: h.width(),
                });
            }
            if h.is_zero() {
                return Err(Error::TrivialShift);
            }
            h
        }
        None => BitString::random_nonzero(n, rng),
    };
    let size = 1u64 << n;
    let mut pool: Vec<u64> = (0..size).collect();
    pool.shuffle(rng);
    let mut values = vec![u64::MAX; size as usize];
    let mut next = 0usize;
    for x in 0..size {
        let partner = x ^ h.value();
        if x <= partner {
            let v = pool[next];
            next += 1;
            values[x as usize] = v;
            values[partner as usize] = v;
        }
    }
    let f = FunctionTable::new(n, n, values)?;
    SimonInstance::new(n, h, f)
}

/// A function on `Z_{2^n}` that repeats with period `T` and is injective on
/// one period.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodicInstance {
    n: u32,
    m: u32,
    period: u64,
    f: FunctionTable,
}

impl PeriodicInstance {
    pub fn new(n: u32, m: u32, period: u64, f: FunctionTable) -> Result<Self> {
        if f.domain_bits() != n || f.codomain_bits() != m {
            return Err(Error::InvalidInstance {
                reason: "instance widths are inconsistent".into(),
            });
        }
        let size = 1u64 << n;
        if period == 0 || period > (1 << m) || period > size {
            return Err(Error::InvalidInstance {
                reason: format!("period {period} outside 1..=min(2^{m}, 2^{n})"),
            });
        }
        for x in 0..size {
            if f.value(x) != f.value(x % period) {
                return Err(Error::InvalidInstance {
                    reason: format!("periodicity violated at {x}"),
                });
            }
        }
        for a in 0..period {
            for b in (a + 1)..period {
                if f.value(a) == f.value(b) {
                    return Err(Error::InvalidInstance {
                        reason: format!("values repeat inside one period at ({a}, {b})"),
                    });
                }
            }
        }
        Ok(PeriodicInstance { n, m, period, f })
    }

    /// Recovers the period from a bare table as the smallest shift under
    /// which the table is invariant.
    pub fn from_table(f: FunctionTable) -> Result<Self> {
        let n = f.domain_bits();
        let size = 1u64 << n;
        let period = (1..=size)
            .find(|&q| (0..size - q).all(|x| f.value(x) == f.value(x + q)))
            .ok_or_else(|| Error::InvalidInstance {
                reason: "table is not periodic".into(),
            })?;
        PeriodicInstance::new(n, f.codomain_bits(), period, f)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Domain size `N = 2^n`.
    pub fn domain_size(&self) -> u64 {
        1 << self.n
    }

    /// Codomain modulus `M = 2^m`.
    pub fn modulus(&self) -> u64 {
        1 << self.m
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn f(&self) -> &FunctionTable {
        &self.f
    }

    /// Number of domain points congruent to `x` modulo the period.
    pub fn residue_count(&self, x: u64) -> u64 {
        debug_assert!(x < self.period);
        (self.domain_size() - x).div_ceil(self.period)
    }

    pub fn id(&self) -> String {
        format!(
            "period-n{}-m{}-t{}-{:08x}",
            self.n,
            self.m,
            self.period,
            self.f.content_hash() as u32
        )
    }
}

/// Builds a periodic instance from a random injective assignment on one
/// period, repeated across the domain.
pub fn make_periodic<R: Rng>(n: u32, m: u32, period: u64, rng: &mut R) -> Result<PeriodicInstance> {
    let size = 1u64 << n;
    if period == 0 || period > (1 << m) || period > size {
        return Err(Error::InvalidInstance {
            reason: format!("period {period} outside 1..=min(2^{m}, 2^{n})"),
        });
    }
    let mut pool: Vec<u64> = (0..(1u64 << m)).collect();
    pool.shuffle(rng);
    let one_period = &pool[..period as usize];
    let values: Vec<u64> = (0..size).map(|x| one_period[(x % period) as usize]).collect();
    let f = FunctionTable::new(n, m, values)?;
    PeriodicInstance::new(n, m, period, f)
}

/// All words orthogonal to `h` under the parity form: an index-two subgroup,
/// and the exact support of the hidden-shift measurement outcomes.
pub fn orthogonal_subgroup(h: BitString) -> Result<Vec<BitString>> {
    if h.is_zero() {
        return Err(Error::TrivialShift);
    }
    let n = h.width();
    let mut out = Vec::with_capacity(1 << (n - 1));
    for x in 0..(1u64 << n) {
        let xb = BitString::new(n, x)?;
        if dot(xb, h)? == 0 {
            out.push(xb);
        }
    }
    Ok(out)
}

/// Outcomes `y` whose centered residue of `y * t mod n_dom` lies within
/// `[-t/2, t/2]`. These are the outcomes from which a convergent of `k/t` can
/// be read off. Boundary ties are included; for power-of-two `n_dom` the
/// count is exactly `t`.
pub fn good_y_set(n_dom: u64, t: u64) -> Vec<u64> {
    assert!(t >= 1 && t <= n_dom, "period must lie in 1..=domain size");
    let mut out = Vec::new();
    for y in 0..n_dom {
        let r = (y * t) % n_dom;
        // Centered representative in (-n_dom/2, n_dom/2].
        let centered = if 2 * r > n_dom { r as i64 - n_dom as i64 } else { r as i64 };
        if 2 * centered.unsigned_abs() <= t {
            out.push(y);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn table_roundtrips_as_json() {
        let f = FunctionTable::new(2, 3, vec![1, 4, 1, 4]).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"domain_bits":2,"codomain_bits":3,"values":[1,4,1,4]}"#
        );
        let back: FunctionTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn table_rejects_oversized_values() {
        assert!(FunctionTable::new(2, 2, vec![0, 1, 4, 2]).is_err());
        assert!(FunctionTable::new(2, 2, vec![0, 1]).is_err());
    }

    #[test]
    fn simon_n2_coset_structure_is_forced() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let inst = make_simon(2, Some(BitString::new(2, 0b11).unwrap()), &mut rng).unwrap();
        let f = inst.f();
        assert_eq!(f.value(0b00), f.value(0b11));
        assert_eq!(f.value(0b01), f.value(0b10));
        assert_ne!(f.value(0b00), f.value(0b01));
    }

    #[test]
    fn simon_n3_has_four_distinct_values_twice_each() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let inst = make_simon(3, Some(BitString::new(3, 0b001).unwrap()), &mut rng).unwrap();
        let mut counts = std::collections::HashMap::new();
        for x in 0..8 {
            *counts.entry(inst.f().value(x)).or_insert(0u32) += 1;
        }
        assert_eq!(counts.len(), 4);
        assert!(counts.values().all(|&c| c == 2));
    }

    #[test]
    fn simon_invariant_scans_clean_at_n6() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // Construction already runs the exhaustive pair scan in new().
        let inst = make_simon(6, None, &mut rng).unwrap();
        assert!(!inst.hidden_shift().is_zero());
    }

    #[test]
    fn simon_rejects_zero_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(matches!(
            make_simon(3, Some(BitString::zero(3)), &mut rng),
            Err(Error::TrivialShift)
        ));
    }

    #[test]
    fn simon_recovers_shift_from_bare_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let inst = make_simon(4, None, &mut rng).unwrap();
        let back = SimonInstance::from_table(inst.f().clone()).unwrap();
        assert_eq!(back.hidden_shift(), inst.hidden_shift());
    }

    #[test]
    fn periodic_constant_when_period_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let inst = make_periodic(3, 2, 1, &mut rng).unwrap();
        let v = inst.f().value(0);
        assert!((0..8).all(|x| inst.f().value(x) == v));
    }

    #[test]
    fn periodic_identity_assignment_layout() {
        // With the identity assignment on one period the table is just the
        // residues; build it directly and validate.
        let values = (0..8u64).map(|x| x % 4).collect();
        let f = FunctionTable::new(3, 2, values).unwrap();
        let inst = PeriodicInstance::new(3, 2, 4, f).unwrap();
        assert_eq!(inst.f().values(), &[0, 1, 2, 3, 0, 1, 2, 3]);
    }

    #[test]
    fn periodic_shift_scan_n8_t5() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let inst = make_periodic(8, 5, 5, &mut rng).unwrap();
        for x in 0..(256 - 5) {
            assert_eq!(inst.f().value(x), inst.f().value(x + 5));
        }
    }

    #[test]
    fn periodic_rejects_period_beyond_codomain() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        assert!(make_periodic(4, 2, 5, &mut rng).is_err());
    }

    #[test]
    fn periodic_recovers_period_from_bare_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let inst = make_periodic(5, 4, 6, &mut rng).unwrap();
        let back = PeriodicInstance::from_table(inst.f().clone()).unwrap();
        assert_eq!(back.period(), 6);
    }

    #[test]
    fn residue_counts_partition_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let inst = make_periodic(6, 4, 5, &mut rng).unwrap();
        let total: u64 = (0..5).map(|x| inst.residue_count(x)).sum();
        assert_eq!(total, 64);
        let floor = 64 / 5;
        for x in 0..5 {
            let a = inst.residue_count(x);
            assert!(a == floor || a == floor + 1);
        }
    }

    #[test]
    fn orthogonal_subgroup_examples() {
        let set = orthogonal_subgroup(BitString::new(2, 0b11).unwrap()).unwrap();
        let vals: Vec<u64> = set.iter().map(|b| b.value()).collect();
        assert_eq!(vals, vec![0b00, 0b11]);

        let set = orthogonal_subgroup(BitString::new(3, 0b001).unwrap()).unwrap();
        let vals: Vec<u64> = set.iter().map(|b| b.value()).collect();
        assert_eq!(vals, vec![0b000, 0b010, 0b100, 0b110]);
    }

    #[test]
    fn orthogonal_subgroup_is_index_two_and_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=10u32 {
            let h = BitString::random_nonzero(n, &mut rng);
            let set = orthogonal_subgroup(h).unwrap();
            assert_eq!(set.len(), 1 << (n - 1));
            assert!(set.iter().any(|b| b.is_zero()));
            // Spot-check closure under XOR.
            let lookup: std::collections::HashSet<u64> =
                set.iter().map(|b| b.value()).collect();
            for a in set.iter().take(8) {
                for b in set.iter().take(8) {
                    assert!(lookup.contains(&(a.value() ^ b.value())));
                }
            }
        }
    }

    #[test]
    fn good_set_examples() {
        assert_eq!(good_y_set(8, 4), vec![0, 2, 4, 6]);
        assert_eq!(good_y_set(16, 3), vec![0, 5, 11]);
        assert_eq!(good_y_set(16, 1), vec![0]);
    }

    #[test]
    fn good_set_count_scan() {
        // The count claim is reported, not asserted: log any (N, T) where the
        // boundary-tie convention changes the size away from T.
        let mut mismatches = Vec::new();
        for n_dom in [4u64, 8, 16, 32, 64, 128, 256] {
            for t in 1..=n_dom {
                let size = good_y_set(n_dom, t).len() as u64;
                if size != t {
                    mismatches.push((n_dom, t, size));
                }
            }
        }
        // Reported rather than asserted: the boundary-tie convention is a
        // judgment call. For power-of-two domains the boundary value is never
        // attained (it would need an odd multiple of T/2 to vanish mod 2^n),
        // so the list stays empty in practice.
        if !mismatches.is_empty() {
            eprintln!("good-set size differs from T at: {mismatches:?}");
        }
    }
}
