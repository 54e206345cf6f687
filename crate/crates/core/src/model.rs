//! Core value types: literals, clauses, keys, and the literal spectrum.
//!
//! Variables are 1-based throughout the public API, matching the DIMACS
//! convention. The solution vector itself — the per-variable pair `(1, 0)`
//! for TRUE and `(0, 1)` for FALSE — is never materialized; it only appears
//! implicitly in [`LiteralSpectrum::measure`].

use rand::Rng;

use crate::error::{Error, Result};
use crate::params::{Mode, Params};

/// A possibly negated variable. `variable` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub variable: u32,
    pub negated: bool,
}

impl Literal {
    pub fn positive(variable: u32) -> Literal {
        Literal { variable, negated: false }
    }

    pub fn negative(variable: u32) -> Literal {
        Literal { variable, negated: true }
    }

    /// Dense encoding: `2*(variable-1)` for the positive literal,
    /// `2*(variable-1) + 1` for the negated one. This is also the order of
    /// the serialized spectrum and of public-key literal fields.
    pub fn code(self) -> u64 {
        u64::from(self.variable - 1) * 2 + u64::from(self.negated)
    }

    /// Inverse of [`Literal::code`].
    pub fn from_code(code: u64) -> Literal {
        Literal { variable: (code / 2 + 1) as u32, negated: code % 2 == 1 }
    }

    /// Signed DIMACS representation: `variable` or `-variable`.
    pub fn dimacs(self) -> i64 {
        let v = i64::from(self.variable);
        if self.negated {
            -v
        } else {
            v
        }
    }
}

/// A disjunction of literals over distinct variables, kept sorted by
/// [`Literal::code`]. The sorted-distinct invariant is established at
/// construction and relied on by the codec (canonical form) and the key
/// generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Validates and canonicalizes a literal list.
    pub fn new(mut literals: Vec<Literal>) -> Result<Clause> {
        if literals.is_empty() {
            return Err(Error::MalformedClause("clause has no literals".into()));
        }
        if let Some(lit) = literals.iter().find(|l| l.variable == 0) {
            return Err(Error::MalformedClause(format!(
                "variable index 0 is invalid (literals are 1-based): {lit:?}"
            )));
        }
        literals.sort_unstable_by_key(|l| l.code());
        if let Some(w) = literals.windows(2).find(|w| w[0].variable == w[1].variable) {
            return Err(Error::MalformedClause(format!(
                "variable x{} appears more than once",
                w[0].variable
            )));
        }
        Ok(Clause { literals })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn width(&self) -> u32 {
        self.literals.len() as u32
    }

    /// Largest variable index referenced.
    pub fn max_variable(&self) -> u32 {
        self.literals.iter().map(|l| l.variable).max().unwrap_or(0)
    }

    /// Number of literals satisfied by `key`. Fails if the clause references
    /// a variable beyond the key's length.
    pub fn true_count(&self, key: &PrivateKey) -> Result<u32> {
        let mut count = 0;
        for lit in &self.literals {
            if key.satisfies(*lit)? {
                count += 1;
            }
        }
        Ok(count)
    }
}

/// A truth assignment over variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    assignment: Vec<bool>,
}

impl PrivateKey {
    pub fn new(assignment: Vec<bool>) -> Result<PrivateKey> {
        if assignment.is_empty() {
            return Err(Error::InvalidParams("private key must cover at least one variable".into()));
        }
        Ok(PrivateKey { assignment })
    }

    /// Samples a uniform assignment over `n` variables.
    pub fn random<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Result<PrivateKey> {
        if n == 0 {
            return Err(Error::InvalidParams("private key must cover at least one variable".into()));
        }
        Ok(PrivateKey { assignment: (0..n).map(|_| rng.random()).collect() })
    }

    pub fn n(&self) -> u32 {
        self.assignment.len() as u32
    }

    pub fn assignment(&self) -> &[bool] {
        &self.assignment
    }

    /// Truth value of a 1-based variable.
    pub fn value(&self, variable: u32) -> Result<bool> {
        if variable == 0 || variable > self.n() {
            return Err(Error::ShapeMismatch(format!(
                "variable x{variable} outside key range 1..={}",
                self.n()
            )));
        }
        Ok(self.assignment[(variable - 1) as usize])
    }

    /// Whether `lit` evaluates to TRUE under this assignment.
    pub fn satisfies(&self, lit: Literal) -> Result<bool> {
        Ok(self.value(lit.variable)? != lit.negated)
    }

    /// The bitwise complement assignment. For undivided keys the complement
    /// decrypts identically to the original; for divided keys it does not.
    pub fn complement(&self) -> PrivateKey {
        PrivateKey { assignment: self.assignment.iter().map(|v| !v).collect() }
    }
}

/// A published clause list together with the parameters it was generated for.
///
/// For divided keys (`mode = m4`) the first `group_clause_count()` clauses
/// are the k-TRUE group and the remainder the (k+1)-TRUE group; the group
/// boundary is positional rather than tagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    params: Params,
    clauses: Vec<Clause>,
}

impl PublicKey {
    /// Validates the publicly checkable invariants: clause count, clause
    /// width, variable range, and per-literal multiplicity. (The defining
    /// k-TRUE property is only checkable with the private key; see
    /// `keygen::verify_keypair`.)
    pub fn new(params: Params, clauses: Vec<Clause>) -> Result<PublicKey> {
        params.validate()?;
        if clauses.len() as u64 != params.clause_count() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} clauses, got {}",
                params.clause_count(),
                clauses.len()
            )));
        }
        let width = params.clause_width();
        let mut multiplicity = vec![0u32; (params.n as usize) * 2];
        for (i, clause) in clauses.iter().enumerate() {
            if clause.width() != width {
                return Err(Error::ShapeMismatch(format!(
                    "clause {i} has width {}, expected {width}",
                    clause.width()
                )));
            }
            if clause.max_variable() > params.n {
                return Err(Error::MalformedClause(format!(
                    "clause {i} references x{} beyond n={}",
                    clause.max_variable(),
                    params.n
                )));
            }
            for lit in clause.literals() {
                multiplicity[lit.code() as usize] += 1;
            }
        }
        // Undivided keys consume the pools exactly (m occurrences per
        // literal); divided keys discard leftovers, so m is only a cap.
        for (code, &count) in multiplicity.iter().enumerate() {
            let ok = match params.mode {
                Mode::M2 | Mode::M3 => count == params.m,
                Mode::M4 => count <= params.m,
            };
            if !ok {
                return Err(Error::ShapeMismatch(format!(
                    "literal {:?} occurs {count} times, expected {} {}",
                    Literal::from_code(code as u64),
                    if params.mode == Mode::M4 { "at most" } else { "exactly" },
                    params.m
                )));
            }
        }
        Ok(PublicKey { params, clauses })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    pub fn is_divided(&self) -> bool {
        self.params.mode.is_divided()
    }

    /// The k-TRUE clause group. For undivided keys this is every clause.
    pub fn k_true_clauses(&self) -> &[Clause] {
        match self.params.mode {
            Mode::M2 | Mode::M3 => &self.clauses,
            Mode::M4 => &self.clauses[..self.params.group_clause_count() as usize],
        }
    }

    /// The (k+1)-TRUE clause group; empty for undivided keys.
    pub fn k_plus1_true_clauses(&self) -> &[Clause] {
        match self.params.mode {
            Mode::M2 | Mode::M3 => &[],
            Mode::M4 => &self.clauses[self.params.group_clause_count() as usize..],
        }
    }
}

/// Per-variable literal counts over some clause subset: `counts[j-1] =
/// (a_j, b_j)` where `a_j` counts occurrences of `x_j` and `b_j` of `¬x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiteralSpectrum {
    counts: Vec<(u32, u32)>,
}

impl LiteralSpectrum {
    /// Tallies literal occurrences across `clauses` for variables `1..=n`.
    pub fn build<'a, I>(clauses: I, n: u32) -> Result<LiteralSpectrum>
    where
        I: IntoIterator<Item = &'a Clause>,
    {
        let mut counts = vec![(0u32, 0u32); n as usize];
        for clause in clauses {
            for lit in clause.literals() {
                let slot = counts.get_mut((lit.variable - 1) as usize).ok_or_else(|| {
                    Error::MalformedClause(format!(
                        "literal references x{} beyond n={n}",
                        lit.variable
                    ))
                })?;
                if lit.negated {
                    slot.1 += 1;
                } else {
                    slot.0 += 1;
                }
            }
        }
        Ok(LiteralSpectrum { counts })
    }

    /// Wraps raw counts (used by the codec and by tests).
    pub fn from_counts(counts: Vec<(u32, u32)>) -> LiteralSpectrum {
        LiteralSpectrum { counts }
    }

    pub fn n(&self) -> u32 {
        self.counts.len() as u32
    }

    pub fn counts(&self) -> &[(u32, u32)] {
        &self.counts
    }

    /// `(a_j, b_j)` for a 1-based variable.
    pub fn pair(&self, variable: u32) -> Result<(u32, u32)> {
        if variable == 0 || variable > self.n() {
            return Err(Error::ShapeMismatch(format!(
                "variable x{variable} outside spectrum range 1..={}",
                self.n()
            )));
        }
        Ok(self.counts[(variable - 1) as usize])
    }

    /// The satisfiability measure `t = Σ_j (a_j·x_j + b_j·¬x_j)`: each
    /// variable contributes its positive count where the key is TRUE and its
    /// negative count where the key is FALSE.
    pub fn measure(&self, key: &PrivateKey) -> Result<u64> {
        if key.n() != self.n() {
            return Err(Error::ShapeMismatch(format!(
                "key covers {} variables, spectrum covers {}",
                key.n(),
                self.n()
            )));
        }
        let mut t = 0u64;
        for (&(a, b), &bit) in self.counts.iter().zip(key.assignment()) {
            t += u64::from(if bit { a } else { b });
        }
        Ok(t)
    }

    /// Returns a copy with `(a_j, b_j)` exchanged for the given variable.
    pub fn swap_pair(&self, variable: u32) -> Result<LiteralSpectrum> {
        let mut out = self.clone();
        out.swap_pair_in_place(variable)?;
        Ok(out)
    }

    /// Exchanges `(a_j, b_j)` in place.
    pub fn swap_pair_in_place(&mut self, variable: u32) -> Result<()> {
        if variable == 0 || variable > self.n() {
            return Err(Error::ShapeMismatch(format!(
                "variable x{variable} outside spectrum range 1..={}",
                self.n()
            )));
        }
        let slot = &mut self.counts[(variable - 1) as usize];
        *slot = (slot.1, slot.0);
        Ok(())
    }

    /// `|a_j - b_j|` for every variable, in variable order.
    pub fn pair_differences(&self) -> Vec<u32> {
        self.counts.iter().map(|&(a, b)| a.abs_diff(b)).collect()
    }

    /// Sum of all counts. For a spectrum built from `e` clauses of width `w`
    /// this is exactly `e*w`.
    pub fn total_count(&self) -> u64 {
        self.counts.iter().map(|&(a, b)| u64::from(a) + u64::from(b)).sum()
    }

    /// The largest single count; used for `q`-overflow checks.
    pub fn max_count(&self) -> u32 {
        self.counts.iter().map(|&(a, b)| a.max(b)).max().unwrap_or(0)
    }
}
