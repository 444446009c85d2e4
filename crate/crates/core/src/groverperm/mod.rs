//! Grover search over a program register. Program |j⟩ makes the processor
//! apply permutation σⱼ to the data; the search looks for the j with
//! σⱼ(k₀) = k₁. Conjugacy in a small group reduces to the same search over
//! the conjugation maps g ↦ hgh⁻¹.

mod group;

pub use group::GroupTable;

use std::f64::consts::PI;

use crate::error::{QError, Result};
use crate::processor::Processor;
use crate::qcore::{c64, sample_outcome, CMatrix, CVector, Operator, RngStream, SubsystemShape};

/// M permutations of N objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationSet {
    n_objects: usize,
    perms: Vec<Vec<usize>>,
}

fn check_bijection(p: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if p.len() != n {
        return Err(QError::InvalidPermutation(format!(
            "{p:?} has {} entries, expected {n}",
            p.len()
        )));
    }
    for &x in p {
        if x >= n || seen[x] {
            return Err(QError::InvalidPermutation(format!("{p:?}")));
        }
        seen[x] = true;
    }
    Ok(())
}

fn random_permutation(n: usize, rng: &mut RngStream) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        p.swap(i, rng.below(i + 1));
    }
    p
}

impl PermutationSet {
    pub fn new(n_objects: usize, perms: Vec<Vec<usize>>) -> Result<Self> {
        if n_objects == 0 || perms.is_empty() {
            return Err(QError::InvalidArgument(
                "need at least one permutation of at least one object".into(),
            ));
        }
        for p in &perms {
            check_bijection(p, n_objects)?;
        }
        Ok(Self { n_objects, perms })
    }

    /// M random permutations of N objects of which exactly one, at a random
    /// position, sends k₀ to k₁. Returns the set and the marked index.
    pub fn random_with_promise(
        m: usize,
        n: usize,
        k0: usize,
        k1: usize,
        rng: &mut RngStream,
    ) -> Result<(Self, usize)> {
        if n < 2 || k0 >= n || k1 >= n || m == 0 {
            return Err(QError::InvalidArgument(format!(
                "need n ≥ 2, m ≥ 1 and objects below n (m={m}, n={n}, k0={k0}, k1={k1})"
            )));
        }
        let marked = rng.below(m);
        let mut perms = Vec::with_capacity(m);
        for j in 0..m {
            loop {
                let p = random_permutation(n, rng);
                if (p[k0] == k1) == (j == marked) {
                    perms.push(p);
                    break;
                }
            }
        }
        Ok((Self::new(n, perms)?, marked))
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Indices j with σⱼ(k₀) = k₁.
    pub fn matches(&self, k0: usize, k1: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.perms[j][k0] == k1)
            .collect()
    }
}

/// |k⟩_X |j⟩_S ↦ |σⱼ(k)⟩_X |j⟩_S on data X (N objects) ⊗ program S (M
/// programs).
pub fn permutation_processor(ps: &PermutationSet) -> Result<Processor> {
    let (n, m) = (ps.n_objects, ps.len());
    if n < 2 {
        return Err(QError::InvalidArgument("need at least two objects".into()));
    }
    let data = SubsystemShape::single(n)?;
    let program = SubsystemShape::single(m)?;
    let mut image = vec![0; n * m];
    for (j, p) in ps.perms.iter().enumerate() {
        for k in 0..n {
            image[k * m + j] = p[k] * m + j;
        }
    }
    let u = Operator::permutation(data.concat(&program), &image)?;
    Processor::new(u, data, program)
}

/// Phase oracle on the program register, together with what was learned
/// while building it.
#[derive(Debug, Clone)]
pub struct MarkingOracle {
    oracle: Operator,
    marked: Vec<usize>,
    /// Largest amplitude left outside data = |k₀⟩ after uncomputation.
    data_leak: f64,
}

impl MarkingOracle {
    pub fn operator(&self) -> &Operator {
        &self.oracle
    }

    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    /// Exactly one program is marked.
    pub fn promise_holds(&self) -> bool {
        self.marked.len() == 1
    }

    pub fn data_leak(&self) -> f64 {
        self.data_leak
    }

    /// The data register ends in |k₀⟩ for every program basis state.
    pub fn disentangled(&self) -> bool {
        self.data_leak < 1e-10
    }

    /// Processor applications per oracle query: compute and uncompute.
    pub const PROCESSOR_USES: usize = 2;
}

/// O|j⟩ = −|j⟩ iff σⱼ(k₀) = k₁, built as U† (Z_{k₁} ⊗ I) U on |k₀⟩ ⊗ |j⟩
/// where Z_{k₁} flips the sign of data state |k₁⟩. The promise is checked,
/// not enforced.
pub fn marking_oracle(ps: &PermutationSet, k0: usize, k1: usize) -> Result<MarkingOracle> {
    let n = ps.n_objects;
    if k0 >= n || k1 >= n {
        return Err(QError::InvalidArgument(format!(
            "objects ({k0}, {k1}) out of range for {n}"
        )));
    }
    let p = permutation_processor(ps)?;
    let m = ps.len();
    let u = p.unitary();
    let u_dag = u.adjoint();
    let dim = n * m;
    let mut oracle = CMatrix::zeros(m, m);
    let mut leak: f64 = 0.0;
    for j in 0..m {
        let mut v = CVector::zeros(dim);
        v[k0 * m + j] = c64(1.0, 0.0);
        let mut w = u.apply_vec(&v)?;
        for s in 0..m {
            w[k1 * m + s] = -w[k1 * m + s];
        }
        let out = u_dag.apply_vec(&w)?;
        for idx in 0..dim {
            let (k, i) = (idx / m, idx % m);
            if k == k0 {
                oracle[(i, j)] = out[idx];
            } else {
                leak = leak.max(out[idx].norm());
            }
        }
    }
    let oracle = Operator::new(SubsystemShape::single(m)?, oracle)?;
    let marked = (0..m).filter(|&j| oracle.mat()[(j, j)].re < -0.5).collect();
    Ok(MarkingOracle {
        oracle,
        marked,
        data_leak: leak,
    })
}

/// round(π/(4θ) − 1/2) with θ = asin(√(t/M)); a zero solution count is
/// treated as one.
pub fn iteration_count(m: usize, solutions: usize) -> usize {
    let t = solutions.max(1);
    if t >= m {
        return 0;
    }
    let theta = ((t as f64) / (m as f64)).sqrt().asin();
    (PI / (4.0 * theta) - 0.5).round().max(0.0) as usize
}

/// sin²((2k+1)θ), the marked-subspace weight after k iterations.
pub fn grover_success(m: usize, solutions: usize, k: usize) -> f64 {
    let theta = ((solutions as f64) / (m as f64)).sqrt().asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroverOutcome {
    pub found: usize,
    pub iterations: usize,
    /// Weight of the marked set in the final state.
    pub success_prob: f64,
    /// Oracle queries times [`MarkingOracle::PROCESSOR_USES`].
    pub processor_uses: usize,
    /// Largest imaginary part seen in the state.
    pub max_imag: f64,
}

/// Oracle then inversion about the mean, repeated [`iteration_count`] times
/// from the uniform superposition, then one computational measurement.
pub fn grover_search(
    oracle: &MarkingOracle,
    m: usize,
    rng: &mut RngStream,
) -> Result<GroverOutcome> {
    if m < 2 {
        return Err(QError::InvalidArgument("need at least two programs".into()));
    }
    if oracle.operator().dim() != m {
        return Err(QError::DimensionMismatch {
            expected: m,
            found: oracle.operator().dim(),
        });
    }
    let iterations = iteration_count(m, oracle.marked().len());
    let o = oracle.operator().mat();
    let mut state = CVector::from_element(m, c64(1.0 / (m as f64).sqrt(), 0.0));
    let mut max_imag: f64 = 0.0;
    for _ in 0..iterations {
        state = o * &state;
        let mean = state.sum() / m as f64;
        state = state.map(|a| mean * 2.0 - a);
        max_imag = max_imag.max(state.iter().map(|a| a.im.abs()).fold(0.0, f64::max));
    }
    let probs: Vec<f64> = state.iter().map(|a| a.norm_sqr()).collect();
    let success_prob = oracle.marked().iter().map(|&j| probs[j]).sum();
    let found = sample_outcome(&probs, rng)?;
    Ok(GroverOutcome {
        found,
        iterations,
        success_prob,
        processor_uses: iterations * MarkingOracle::PROCESSOR_USES,
        max_imag,
    })
}

/// ⌈(π/4)√M⌉ · 2, the processor-use budget of one search.
pub fn processor_use_budget(m: usize) -> usize {
    ((PI / 4.0) * (m as f64).sqrt()).ceil() as usize * MarkingOracle::PROCESSOR_USES
}

/// For each h, the permutation g ↦ hgh⁻¹ of the group elements.
pub fn conjugation_permutations(g: &GroupTable) -> PermutationSet {
    let n = g.order();
    let perms = (0..n)
        .map(|h| (0..n).map(|x| g.conjugate(h, x)).collect())
        .collect();
    PermutationSet::new(n, perms).expect("conjugation is a bijection")
}

/// Search attempts before reporting that no witness exists. Some group
/// instances leave a marked weight of only 1/2 per search.
pub const CONJUGACY_ATTEMPTS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ConjugacyOutcome {
    /// h with h g₁ h⁻¹ = g₂, checked against the table.
    pub witness: Option<usize>,
    pub solutions: usize,
    pub attempts: usize,
    pub processor_uses: usize,
    pub promise_holds: bool,
    /// Marked weight before measurement in the last attempt.
    pub success_prob: f64,
}

/// Grover search over the conjugation maps with k₀ = g₁, k₁ = g₂. Each
/// measured candidate is verified classically; up to
/// [`CONJUGACY_ATTEMPTS`] searches are run.
pub fn conjugacy_search(
    g: &GroupTable,
    g1: usize,
    g2: usize,
    rng: &mut RngStream,
) -> Result<ConjugacyOutcome> {
    g.check_element(g1)?;
    g.check_element(g2)?;
    let ps = conjugation_permutations(g);
    let oracle = marking_oracle(&ps, g1, g2)?;
    let mut uses = 0;
    let mut last = 0.0;
    for attempt in 1..=CONJUGACY_ATTEMPTS {
        let run = grover_search(&oracle, ps.len(), rng)?;
        uses += run.processor_uses;
        last = run.success_prob;
        if g.conjugate(run.found, g1) == g2 {
            return Ok(ConjugacyOutcome {
                witness: Some(run.found),
                solutions: oracle.marked().len(),
                attempts: attempt,
                processor_uses: uses,
                promise_holds: oracle.promise_holds(),
                success_prob: last,
            });
        }
    }
    Ok(ConjugacyOutcome {
        witness: None,
        solutions: oracle.marked().len(),
        attempts: CONJUGACY_ATTEMPTS,
        processor_uses: uses,
        promise_holds: oracle.promise_holds(),
        success_prob: last,
    })
}
