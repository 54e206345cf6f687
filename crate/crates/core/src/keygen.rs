//! Key generation.
//!
//! A freshly sampled assignment splits the `2n` literals into a TRUE side
//! and a FALSE side. Key generation keeps a pool of `m` copies of every
//! literal on each side and assembles clauses by drawing without
//! replacement: `k` TRUE and `k` FALSE literals per clause for undivided
//! keys, so every clause has exactly `k` satisfied literals; for divided
//! keys, clauses alternate between `k` TRUE + `k+1` FALSE (the k-TRUE
//! group) and `k+1` TRUE + `k` FALSE (the (k+1)-TRUE group).
//!
//! A draw is retried (returning nothing to the pool is unnecessary — a
//! failed draw is simply redrawn from the same remaining multiset) when the
//! drawn literals collide on a variable. Late in a pass the remaining pool
//! can make collisions unavoidable, so after [`CLAUSE_ATTEMPTS`] failures
//! the whole pass restarts with fresh pools, up to [`PASS_ATTEMPTS`] times.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{Clause, Literal, PrivateKey, PublicKey};
use crate::params::{Mode, Params};

/// Redraws allowed for a single clause before the pass is abandoned.
pub const CLAUSE_ATTEMPTS: u32 = 64;
/// Full restarts allowed before key generation reports failure.
pub const PASS_ATTEMPTS: u32 = 256;

/// One side's literal pool: `m` copies of each of the `n` literals, drawn
/// without replacement via partial Fisher–Yates shuffles.
struct Pool {
    literals: Vec<Literal>,
    used: usize,
}

impl Pool {
    fn new(side: &[Literal], m: u32) -> Pool {
        let mut literals = Vec::with_capacity(side.len() * m as usize);
        for _ in 0..m {
            literals.extend_from_slice(side);
        }
        Pool { literals, used: 0 }
    }

    fn remaining(&self) -> usize {
        self.literals.len() - self.used
    }

    /// Uniformly stages `count` literals from the remaining multiset by
    /// swapping them into the positions following `used`. Staged literals
    /// are not consumed until [`Pool::commit`]; a subsequent `stage` redraws
    /// from the same remaining multiset.
    fn stage<R: Rng + ?Sized>(&mut self, count: usize, rng: &mut R) {
        debug_assert!(count <= self.remaining());
        for i in 0..count {
            let pick = rng.random_range(self.used + i..self.literals.len());
            self.literals.swap(self.used + i, pick);
        }
    }

    fn staged(&self, count: usize) -> &[Literal] {
        &self.literals[self.used..self.used + count]
    }

    fn commit(&mut self, count: usize) {
        self.used += count;
    }

    fn reset(&mut self) {
        self.used = 0;
    }
}

/// True when the staged halves use `true_count + false_count` distinct
/// variables, i.e. the clause would not repeat a variable.
fn distinct_variables(a: &[Literal], b: &[Literal], scratch: &mut Vec<u32>) -> bool {
    scratch.clear();
    scratch.extend(a.iter().chain(b).map(|l| l.variable));
    scratch.sort_unstable();
    scratch.windows(2).all(|w| w[0] != w[1])
}

/// Generates a key pair for any mode. Undivided modes (`m2`, `m3`) produce
/// `m*n/k` clauses of width `2k`; `m4` produces two equal groups of width
/// `2k+1`. The same `params` passed here are embedded in the public key.
pub fn generate_keypair<R: Rng + ?Sized>(
    params: &Params,
    rng: &mut R,
) -> Result<(PublicKey, PrivateKey)> {
    params.validate()?;
    let sk = PrivateKey::random(params.n, rng)?;

    let mut true_side = Vec::with_capacity(params.n as usize);
    let mut false_side = Vec::with_capacity(params.n as usize);
    for variable in 1..=params.n {
        let satisfied = Literal { variable, negated: !sk.value(variable)? };
        true_side.push(satisfied);
        false_side.push(Literal { variable, negated: !satisfied.negated });
    }
    let mut true_pool = Pool::new(&true_side, params.m);
    let mut false_pool = Pool::new(&false_side, params.m);

    // Per-clause draw sizes from (true pool, false pool). Divided keys
    // alternate so both groups grow in step as the pools drain.
    let k = params.k as usize;
    let plan: Vec<(usize, usize)> = match params.mode {
        Mode::M2 | Mode::M3 => vec![(k, k); params.clause_count() as usize],
        Mode::M4 => (0..params.clause_count() as usize)
            .map(|i| if i % 2 == 0 { (k, k + 1) } else { (k + 1, k) })
            .collect(),
    };

    let mut scratch = Vec::with_capacity(2 * k + 1);
    for _pass in 0..PASS_ATTEMPTS {
        true_pool.reset();
        false_pool.reset();
        let group_size = params.group_clause_count() as usize;
        let mut k_true_group: Vec<Clause> = Vec::with_capacity(group_size);
        let mut k_plus1_group: Vec<Clause> = Vec::with_capacity(plan.len() - group_size);
        let mut pass_ok = true;

        'clauses: for &(from_true, from_false) in &plan {
            for _attempt in 0..CLAUSE_ATTEMPTS {
                true_pool.stage(from_true, rng);
                false_pool.stage(from_false, rng);
                if distinct_variables(
                    true_pool.staged(from_true),
                    false_pool.staged(from_false),
                    &mut scratch,
                ) {
                    let mut literals = Vec::with_capacity(from_true + from_false);
                    literals.extend_from_slice(true_pool.staged(from_true));
                    literals.extend_from_slice(false_pool.staged(from_false));
                    true_pool.commit(from_true);
                    false_pool.commit(from_false);
                    let clause = Clause::new(literals)?;
                    if from_true == k {
                        k_true_group.push(clause);
                    } else {
                        k_plus1_group.push(clause);
                    }
                    continue 'clauses;
                }
            }
            pass_ok = false;
            break;
        }

        if pass_ok {
            k_true_group.extend(k_plus1_group);
            let pk = PublicKey::new(*params, k_true_group)?;
            return Ok((pk, sk));
        }
    }

    Err(Error::GenerationFailure(format!(
        "no collision-free clause arrangement found in {PASS_ATTEMPTS} passes \
         (params {params})"
    )))
}

/// Everything [`verify_keypair`] checked, with per-clause detail.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    /// True when every check passed.
    pub passed: bool,
    /// Satisfied-literal count per clause, in key order.
    pub clause_true_counts: Vec<u32>,
    /// Human-readable description of each failed check.
    pub failures: Vec<String>,
}

/// Re-derives the key invariants from scratch: clause shape, literal
/// multiplicity, and the defining satisfied-literal count per clause (`k`
/// everywhere, or `k`/`k+1` per group for divided keys).
pub fn verify_keypair(pk: &PublicKey, sk: &PrivateKey) -> VerifyReport {
    let params = pk.params();
    let mut failures = Vec::new();
    let mut clause_true_counts = Vec::with_capacity(pk.clauses().len());

    if sk.n() != params.n {
        failures.push(format!(
            "private key covers {} variables, parameters say n={}",
            sk.n(),
            params.n
        ));
    }

    let group_size = params.group_clause_count() as usize;
    for (i, clause) in pk.clauses().iter().enumerate() {
        if clause.width() != params.clause_width() {
            failures.push(format!(
                "clause {i} has width {}, expected {}",
                clause.width(),
                params.clause_width()
            ));
        }
        match clause.true_count(sk) {
            Ok(count) => {
                clause_true_counts.push(count);
                let expected = match params.mode {
                    Mode::M2 | Mode::M3 => params.k,
                    Mode::M4 => {
                        if i < group_size {
                            params.k
                        } else {
                            params.k + 1
                        }
                    }
                };
                if count != expected {
                    failures.push(format!(
                        "clause {i} has {count} TRUE literals, expected {expected}"
                    ));
                }
            }
            Err(e) => failures.push(format!("clause {i}: {e}")),
        }
    }

    let mut multiplicity = vec![0u32; params.n as usize * 2];
    for clause in pk.clauses() {
        for lit in clause.literals() {
            multiplicity[lit.code() as usize] += 1;
        }
    }
    for (code, &count) in multiplicity.iter().enumerate() {
        let ok = match params.mode {
            Mode::M2 | Mode::M3 => count == params.m,
            Mode::M4 => count <= params.m,
        };
        if !ok {
            failures.push(format!(
                "literal {:?} occurs {count} times (m={})",
                Literal::from_code(code as u64),
                params.m
            ));
        }
    }

    VerifyReport { passed: failures.is_empty(), clause_true_counts, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;

    #[test]
    fn tiny_undivided_key_satisfies_all_invariants() {
        let params = Params::new(Mode::M2, 2, 8, 2, 1, 3, 4).unwrap();
        let mut rng = seeded_rng(1);
        let (pk, sk) = generate_keypair(&params, &mut rng).unwrap();
        assert_eq!(pk.clauses().len(), 8);
        let report = verify_keypair(&pk, &sk);
        assert!(report.passed, "failures: {:?}", report.failures);
        assert!(report.clause_true_counts.iter().all(|&c| c == 2));
    }

    #[test]
    fn paper_scale_key_generates_and_verifies() {
        let params = Params::new(Mode::M2, 4, 512, 20, 1, 768, 4).unwrap();
        let mut rng = seeded_rng(2);
        let (pk, sk) = generate_keypair(&params, &mut rng).unwrap();
        assert_eq!(pk.clauses().len(), 2560);
        let report = verify_keypair(&pk, &sk);
        assert!(report.passed, "failures: {:?}", report.failures);
    }

    #[test]
    fn complement_key_also_verifies_for_undivided_modes() {
        let params = Params::new(Mode::M3, 2, 16, 4, 2, 8, 4).unwrap();
        let mut rng = seeded_rng(3);
        let (pk, sk) = generate_keypair(&params, &mut rng).unwrap();
        assert!(verify_keypair(&pk, &sk).passed);
        assert!(verify_keypair(&pk, &sk.complement()).passed);
    }

    #[test]
    fn divided_key_groups_have_k_and_k_plus1_true_literals() {
        let params = Params::new(Mode::M4, 2, 40, 2, 4, 16, 4).unwrap();
        let mut rng = seeded_rng(4);
        let (pk, sk) = generate_keypair(&params, &mut rng).unwrap();
        assert_eq!(pk.k_true_clauses().len(), 16);
        assert_eq!(pk.k_plus1_true_clauses().len(), 16);
        let report = verify_keypair(&pk, &sk);
        assert!(report.passed, "failures: {:?}", report.failures);
        for clause in pk.k_true_clauses() {
            assert_eq!(clause.true_count(&sk).unwrap(), 2);
        }
        for clause in pk.k_plus1_true_clauses() {
            assert_eq!(clause.true_count(&sk).unwrap(), 3);
        }
        // The complement flips every clause's count, so it is NOT an
        // equivalent divided key.
        assert!(!verify_keypair(&pk, &sk.complement()).passed);
    }

    #[test]
    fn same_seed_reproduces_the_same_keypair() {
        let params = Params::new(Mode::M2, 2, 16, 4, 1, 8, 4).unwrap();
        let (pk1, sk1) = generate_keypair(&params, &mut seeded_rng(9)).unwrap();
        let (pk2, sk2) = generate_keypair(&params, &mut seeded_rng(9)).unwrap();
        let (pk3, _) = generate_keypair(&params, &mut seeded_rng(10)).unwrap();
        assert_eq!(pk1, pk2);
        assert_eq!(sk1, sk2);
        assert_ne!(pk1, pk3);
    }

    #[test]
    fn wrong_key_fails_verification() {
        let params = Params::new(Mode::M2, 2, 16, 4, 1, 8, 4).unwrap();
        let mut rng = seeded_rng(11);
        let (pk, sk) = generate_keypair(&params, &mut rng).unwrap();
        // Flip one variable: clauses touching it shift away from k TRUE.
        let mut flipped = sk.assignment().to_vec();
        flipped[0] = !flipped[0];
        let report = verify_keypair(&pk, &PrivateKey::new(flipped).unwrap());
        assert!(!report.passed);
    }

    #[test]
    fn minimum_size_key_generates() {
        // n = 2k: every clause uses every variable exactly once.
        let params = Params::new(Mode::M2, 2, 4, 3, 1, 2, 4).unwrap();
        let mut rng = seeded_rng(12);
        let (pk, sk) = generate_keypair(&params, &mut rng).unwrap();
        assert_eq!(pk.clauses().len(), 6);
        assert!(verify_keypair(&pk, &sk).passed);
    }
}
