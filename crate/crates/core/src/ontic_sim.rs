//! Simulation of the classical subtheories: epistemic distributions over a
//! finite ontic space evolve by deterministic permutations, unitaries are
//! registered only when they supervene on such a permutation, and circuit
//! statistics are computed both ontically and quantum-mechanically.

use crate::error::{QprError, Result};
use crate::operator_core::{rotation_unitary, BlochVector, HermitianOp, QubitBasis, Unitary};
use crate::quasirep::{OnticDistribution, QuasiRep, Sign};
use crate::qubit_families::{
    c2_distribution, d3_distribution, family_bases, FamilyKind, FamilySpec, SupportPattern,
};
use std::collections::BTreeMap;

const STATE_MATCH_TOL: f64 = 1e-9;

/// Bijection on the points of an ontic space, stored as an index map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnticPermutation {
    map: Vec<usize>,
}

impl OnticPermutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &v in &map {
            if v >= map.len() || seen[v] {
                return Err(QprError::InvalidParameter(
                    "permutation map is not a bijection".into(),
                ));
            }
            seen[v] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn apply(&self, idx: usize) -> usize {
        self.map[idx]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Self { map: inv }
    }

    /// self after `first`: (self . first)(i) = self(first(i)).
    pub fn after(&self, first: &OnticPermutation) -> Self {
        Self {
            map: first.map.iter().map(|&i| self.map[i]).collect(),
        }
    }
}

/// Pushforward of a distribution: (pi . mu)(lambda) = mu(pi^-1 lambda).
pub fn pushforward(dist: &OnticDistribution, perm: &OnticPermutation) -> Result<OnticDistribution> {
    if dist.space().len() != perm.len() {
        return Err(QprError::DimensionMismatch(
            "permutation does not act on this ontic space".into(),
        ));
    }
    let mut values = vec![0.0; dist.values().len()];
    for (i, &v) in dist.values().iter().enumerate() {
        values[perm.apply(i)] = v;
    }
    OnticDistribution::new(dist.space().clone(), values)
}

#[derive(Debug, Clone)]
pub struct RegisteredGate {
    pub unitary: Unitary,
    pub permutation: OnticPermutation,
}

/// A classical subtheory: a representation, the non-negative basis elements
/// as labeled states, and named gates whose unitaries supervene on ontic
/// permutations. Registration rejects gates that do not supervene.
#[derive(Debug, Clone)]
pub struct SubtheoryModel {
    rep: QuasiRep,
    bases: Vec<QubitBasis>,
    basis_names: Vec<String>,
    gates: BTreeMap<String, RegisteredGate>,
}

impl SubtheoryModel {
    pub fn new(rep: QuasiRep, bases: Vec<QubitBasis>, basis_names: Vec<String>) -> Result<Self> {
        if bases.len() != basis_names.len() {
            return Err(QprError::DimensionMismatch(
                "one name per basis required".into(),
            ));
        }
        for basis in &bases {
            if !rep.is_nonnegative_elements(basis.elements(), STATE_MATCH_TOL)? {
                return Err(QprError::Contract(
                    "model bases must be non-negative in the representation".into(),
                ));
            }
        }
        Ok(Self {
            rep,
            bases,
            basis_names,
            gates: BTreeMap::new(),
        })
    }

    pub fn rep(&self) -> &QuasiRep {
        &self.rep
    }

    pub fn bases(&self) -> &[QubitBasis] {
        &self.bases
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn gates(&self) -> &BTreeMap<String, RegisteredGate> {
        &self.gates
    }

    /// All model states in basis-major order, + element first.
    pub fn states(&self) -> Vec<&HermitianOp> {
        self.bases
            .iter()
            .flat_map(|b| [b.element(1), b.element(-1)])
            .collect()
    }

    pub fn state_label(&self, basis: usize, gamma: Sign) -> String {
        format!("{}{}", self.basis_names[basis], gamma)
    }

    pub fn parse_state_label(&self, label: &str) -> Result<(usize, Sign)> {
        let (name, sign) = label
            .split_at_checked(label.len().saturating_sub(1))
            .ok_or_else(|| QprError::UnknownLabel(label.into()))?;
        let gamma = match sign {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            _ => return Err(QprError::UnknownLabel(format!("state label `{label}`"))),
        };
        let basis = self
            .basis_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| QprError::UnknownLabel(format!("basis `{name}`")))?;
        Ok((basis, gamma))
    }

    pub fn basis_index(&self, name: &str) -> Result<usize> {
        self.basis_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| QprError::UnknownLabel(format!("basis `{name}`")))
    }

    pub fn state(&self, label: &str) -> Result<&HermitianOp> {
        let (basis, gamma) = self.parse_state_label(label)?;
        Ok(self.bases[basis].element(gamma.to_i8()))
    }

    /// Registers a gate, searching for a supervening permutation; rejects the
    /// gate if none exists.
    pub fn register_gate(&mut self, name: &str, unitary: Unitary) -> Result<()> {
        match find_permutation(&unitary, self)? {
            Some(permutation) => {
                self.gates.insert(
                    name.to_string(),
                    RegisteredGate {
                        unitary,
                        permutation,
                    },
                );
                Ok(())
            }
            None => Err(QprError::Contract(format!(
                "gate {name} permutes the states but supervenes on no ontic permutation"
            ))),
        }
    }

    pub fn gate(&self, name: &str) -> Result<&RegisteredGate> {
        self.gates
            .get(name)
            .ok_or_else(|| QprError::UnknownLabel(format!("gate `{name}`")))
    }

    /// The canonical stabilizer model: x, y, z bases with the uniform
    /// distribution; the full single-qubit Clifford generators supervene.
    pub fn stabilizer() -> Result<Self> {
        let rep = crate::qubit_families::stabilizer_rep();
        let bases = family_bases(&FamilySpec::new(FamilyKind::Stabilizer))?;
        let mut model = Self::new(rep, bases, vec!["x".into(), "y".into(), "z".into()])?;
        model.register_gate("H", Unitary::hadamard())?;
        model.register_gate("P", Unitary::phase_gate())?;
        model.register_gate("X", Unitary::x())?;
        model.register_gate("Y", Unitary::y())?;
        model.register_gate("Z", Unitary::z())?;
        Ok(model)
    }

    /// D3 family model; GAMMA always supervenes, PI only for the symmetric
    /// distribution (q0 = None).
    pub fn d3(theta: f64, q0: Option<f64>) -> Result<Self> {
        let spec = FamilySpec::new(FamilyKind::D3).with_theta(theta);
        let bases = family_bases(&spec)?;
        let dist = d3_distribution(theta, q0)?;
        let rep = crate::qubit_families::build_frame(&bases, &dist, &SupportPattern::table_i())?;
        let mut model = Self::new(rep, bases, vec!["b1".into(), "b2".into(), "b3".into()])?;
        model.register_gate("GAMMA", gamma_unitary()?)?;
        let _ = model.register_gate("PI", pi_unitary()?);
        Ok(model)
    }

    /// C2 family model; Z always supervenes, X only at phi = pi/2.
    pub fn c2(theta: f64, phi: f64) -> Result<Self> {
        let spec = FamilySpec::new(FamilyKind::C2)
            .with_theta(theta)
            .with_phi(phi);
        let bases = family_bases(&spec)?;
        let dist = c2_distribution(theta, phi, None)?;
        let rep = crate::qubit_families::build_frame(&bases, &dist, &SupportPattern::table_i())?;
        let mut model = Self::new(rep, bases, vec!["b1".into(), "b2".into(), "b3".into()])?;
        model.register_gate("Z", Unitary::z())?;
        if (phi - std::f64::consts::FRAC_PI_2).abs() < 1e-9 {
            model.register_gate("X", Unitary::x())?;
        }
        Ok(model)
    }

    /// Cuboid family model over six points; X and Z supervene for all
    /// parameters, P when the z faces are square (phi = pi/4), H for the cube.
    pub fn cuboid(theta: f64, phi: f64) -> Result<Self> {
        let spec = FamilySpec::new(FamilyKind::Cuboid)
            .with_theta(theta)
            .with_phi(phi);
        let bases = family_bases(&spec)?;
        let dist = crate::qubit_families::cuboid_distribution(theta, phi)?;
        let rep =
            crate::qubit_families::build_frame(&bases, &dist, &SupportPattern::cuboid(&bases)?)?;
        let mut model = Self::new(
            rep,
            bases,
            vec!["b1".into(), "b2".into(), "b3".into(), "b4".into()],
        )?;
        model.register_gate("X", Unitary::x())?;
        model.register_gate("Z", Unitary::z())?;
        if (phi - std::f64::consts::FRAC_PI_4).abs() < 1e-9 {
            let _ = model.register_gate("P", Unitary::phase_gate());
        }
        if (phi - std::f64::consts::FRAC_PI_4).abs() < 1e-9
            && (theta.cos() - 1.0 / 3f64.sqrt()).abs() < 1e-9
        {
            let _ = model.register_gate("H", Unitary::hadamard());
        }
        Ok(model)
    }
}

pub fn gamma_unitary() -> Result<Unitary> {
    rotation_unitary(
        &BlochVector::new(0., 0., 1.),
        2.0 * std::f64::consts::PI / 3.0,
    )
}

pub fn pi_unitary() -> Result<Unitary> {
    rotation_unitary(&BlochVector::new(0., 1., 0.), std::f64::consts::PI)
}

/// How `u` permutes the model's states: result[k] = index of U rho_k U^dag.
/// Errors when the state set is not closed under `u`.
pub fn state_action(u: &Unitary, model: &SubtheoryModel) -> Result<Vec<usize>> {
    let states = model.states();
    let mut action = Vec::with_capacity(states.len());
    for (k, rho) in states.iter().enumerate() {
        let image = rho.conjugated_by(u)?;
        let target = states
            .iter()
            .position(|s| image.trace_distance(s).unwrap_or(f64::INFINITY) < STATE_MATCH_TOL);
        match target {
            Some(t) => action.push(t),
            None => {
                return Err(QprError::Contract(format!(
                    "unitary does not map the state set to itself (state {k} leaves the set)"
                )))
            }
        }
    }
    let mut seen = vec![false; action.len()];
    for &t in &action {
        if seen[t] {
            return Err(QprError::Contract(
                "unitary action on states is not injective".into(),
            ));
        }
        seen[t] = true;
    }
    Ok(action)
}

/// True iff pushing every model state's distribution through `perm` gives
/// the distribution of the unitarily transformed state, within `tol`.
pub fn supervenes(
    perm: &OnticPermutation,
    u: &Unitary,
    model: &SubtheoryModel,
    tol: f64,
) -> Result<bool> {
    let action = state_action(u, model)?;
    let states = model.states();
    for (k, rho) in states.iter().enumerate() {
        let mu = model.rep.mu_dist(rho)?;
        let pushed = pushforward(&mu, perm)?;
        let target = model.rep.mu_dist(states[action[k]])?;
        if pushed.max_abs_diff(&target) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

fn permutation_search(
    model: &SubtheoryModel,
    action: &[usize],
    all: bool,
) -> Result<Vec<OnticPermutation>> {
    let states = model.states();
    let n = model.rep.space().len();
    let dists: Vec<Vec<f64>> = states
        .iter()
        .map(|s| Ok(model.rep.mu_dist(s)?.values().to_vec()))
        .collect::<Result<Vec<_>>>()?;

    // Point i may map to j only if every state's value at i matches its
    // image state's value at j.
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::new();
        'target: for j in 0..n {
            for (k, &mk) in action.iter().enumerate() {
                if (dists[k][i] - dists[mk][j]).abs() > STATE_MATCH_TOL {
                    continue 'target;
                }
            }
            row.push(j);
        }
        candidates.push(row);
    }

    let mut found = Vec::new();
    let mut assignment = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn backtrack(
        i: usize,
        n: usize,
        candidates: &[Vec<usize>],
        assignment: &mut Vec<usize>,
        used: &mut Vec<bool>,
        found: &mut Vec<OnticPermutation>,
        all: bool,
    ) -> bool {
        if i == n {
            found.push(OnticPermutation::new(assignment.clone()).expect("bijection by used set"));
            return !all;
        }
        for &j in &candidates[i] {
            if used[j] {
                continue;
            }
            assignment[i] = j;
            used[j] = true;
            if backtrack(i + 1, n, candidates, assignment, used, found, all) {
                return true;
            }
            used[j] = false;
        }
        assignment[i] = usize::MAX;
        false
    }
    backtrack(
        0,
        n,
        &candidates,
        &mut assignment,
        &mut used,
        &mut found,
        all,
    );
    Ok(found)
}

/// Exhaustive search (lexicographic, support-compatibility pruned) for a
/// permutation on which `u` supervenes; `None` when no permutation exists.
/// Errors when `u` does not permute the model's state set at all.
pub fn find_permutation(u: &Unitary, model: &SubtheoryModel) -> Result<Option<OnticPermutation>> {
    let action = state_action(u, model)?;
    let mut hits = permutation_search(model, &action, false)?;
    match hits.pop() {
        Some(perm) => {
            debug_assert!(supervenes(&perm, u, model, 1e-8)?);
            Ok(Some(perm))
        }
        None => Ok(None),
    }
}

/// All permutations effecting `u`, in lexicographic order.
pub fn find_permutations(u: &Unitary, model: &SubtheoryModel) -> Result<Vec<OnticPermutation>> {
    let action = state_action(u, model)?;
    permutation_search(model, &action, true)
}

/// The eps-flip on the eight-point space: (eps, a) -> (-eps, a).
pub fn eps_flip_permutation() -> OnticPermutation {
    OnticPermutation::new(vec![4, 5, 6, 7, 0, 1, 2, 3]).expect("bijection")
}

/// Checks that the eps-flip effects the universal NOT r -> -r on every model
/// state of an eight-point stabilizer-family model.
pub fn universal_not_check(model: &SubtheoryModel) -> Result<bool> {
    if model.rep.space().len() != 8 || model.bases.len() != 3 {
        return Err(QprError::Contract(
            "universal NOT check needs an 8-point three-basis model".into(),
        ));
    }
    let flip = eps_flip_permutation();
    for basis in &model.bases {
        for gamma in [1i8, -1i8] {
            let rho = basis.element(gamma);
            let negated = basis.element(-gamma);
            let pushed = pushforward(&model.rep.mu_dist(rho)?, &flip)?;
            let target = model.rep.mu_dist(negated)?;
            if pushed.max_abs_diff(&target) > STATE_MATCH_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True iff some registered gate acts on the state set exactly as the
/// universal NOT (it cannot: the NOT is antiunitary).
pub fn gate_set_contains_not(model: &SubtheoryModel) -> Result<bool> {
    let states = model.states();
    let mut not_action = Vec::with_capacity(states.len());
    for rho in &states {
        let r = crate::operator_core::density_to_bloch(rho)?;
        let negated = crate::operator_core::bloch_to_density(&r.neg())?;
        let target = states
            .iter()
            .position(|s| negated.trace_distance(s).unwrap_or(f64::INFINITY) < STATE_MATCH_TOL);
        match target {
            Some(t) => not_action.push(t),
            None => return Ok(false),
        }
    }
    for gate in model.gates.values() {
        if state_action(&gate.unitary, model)? == not_action {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Outcome statistics of a circuit run, computed ontically (permutation
/// pushforwards, then indicator integration) and quantum-mechanically
/// (matrix products); the two must agree.
#[derive(Debug, Clone)]
pub struct CircuitOutcome {
    pub ontic: Vec<f64>,
    pub quantum: Vec<f64>,
    pub max_deviation: f64,
    pub agree: bool,
}

/// Runs `circuit` (whitespace-separated gate names) from the state labeled
/// `initial`, measuring in the basis labeled `measure`. Outcomes are ordered
/// gamma = + first.
pub fn run_circuit(
    model: &SubtheoryModel,
    initial: &str,
    circuit: &str,
    measure: &str,
) -> Result<CircuitOutcome> {
    let rho0 = model.state(initial)?.clone();
    let measure_basis = model.basis_index(measure)?;

    let mut mu = model.rep.mu_dist(&rho0)?;
    let mut rho = rho0;
    for name in circuit.split_whitespace() {
        let gate = model.gate(name)?;
        mu = pushforward(&mu, &gate.permutation)?;
        rho = rho.conjugated_by(&gate.unitary)?;
    }

    let mut ontic = Vec::with_capacity(2);
    let mut quantum = Vec::with_capacity(2);
    for gamma in [1i8, -1i8] {
        let effect = model.bases[measure_basis].element(gamma);
        let mut p = 0.0;
        for idx in 0..model.rep.space().len() {
            p += mu.value(idx) * model.rep.xi_at(effect, idx)?;
        }
        ontic.push(p);
        quantum.push(rho.inner(effect)?);
    }
    let max_deviation = ontic
        .iter()
        .zip(quantum.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(CircuitOutcome {
        ontic,
        quantum,
        max_deviation,
        agree: max_deviation <= 1e-10,
    })
}

/// The 24 proper rotations of the octahedron (signed permutation matrices
/// with determinant +1) lifted to unitaries: the single-qubit Clifford
/// rotations.
pub fn clifford_rotations() -> Vec<([[f64; 3]; 3], Unitary)> {
    let perms = [
        [0usize, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut out = Vec::with_capacity(24);
    for perm in perms {
        for bits in 0..8usize {
            let signs = [
                if bits & 1 == 0 { 1.0 } else { -1.0 },
                if bits & 2 == 0 { 1.0 } else { -1.0 },
                if bits & 4 == 0 { 1.0 } else { -1.0 },
            ];
            let mut m = [[0.0; 3]; 3];
            for (row, &p) in perm.iter().enumerate() {
                m[row][p] = signs[row];
            }
            let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            if det > 0.0 {
                let u = crate::operator_core::so3_to_unitary(&m).expect("rotation");
                out.push((m, u));
            }
        }
    }
    out
}
