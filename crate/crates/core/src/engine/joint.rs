use super::message::FactorId;
use crate::quantum::{
    apply_unitary, measure, MeasurementRecord, Povm, QuantumError, StateVector, UnitaryOp,
};
use crate::types::Role;
use rand::Rng;

#[derive(Debug, Clone)]
struct FactorEntry {
    id: FactorId,
    dim: usize,
    owner: Role,
}

/// The engine-owned joint quantum state and its factor ownership table.
#[derive(Debug, Clone)]
pub struct JointState {
    factors: Vec<FactorEntry>,
    state: StateVector,
    next_id: u64,
}

impl JointState {
    pub fn new() -> Self {
        Self {
            factors: Vec::new(),
            state: StateVector::from_parts_unchecked(
                Vec::new(),
                crate::quantum::CVector::from_vec(vec![num_complex::Complex::new(1.0, 0.0)]),
            ),
            next_id: 0,
        }
    }

    /// Tensors `sv` into the joint state; the new factors belong to `owner`.
    pub fn prepare(&mut self, owner: Role, sv: StateVector) -> Vec<FactorId> {
        let mut ids = Vec::with_capacity(sv.dims().len());
        for &dim in sv.dims() {
            let id = FactorId(self.next_id);
            self.next_id += 1;
            self.factors.push(FactorEntry { id, dim, owner });
            ids.push(id);
        }
        self.state = crate::quantum::tensor(&self.state, &sv);
        ids
    }

    fn positions(&self, ids: &[FactorId]) -> Result<Vec<usize>, String> {
        ids.iter()
            .map(|id| {
                self.factors
                    .iter()
                    .position(|f| f.id == *id)
                    .ok_or_else(|| format!("unknown or expired factor {}", id.0))
            })
            .collect()
    }

    fn check_owner(&self, ids: &[FactorId], who: Role) -> Result<(), String> {
        for id in ids {
            match self.factors.iter().find(|f| f.id == *id) {
                None => return Err(format!("unknown or expired factor {}", id.0)),
                Some(f) if f.owner != who => {
                    return Err(format!("factor {} is not held by {who}", id.0))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn apply(
        &mut self,
        who: Role,
        u: &UnitaryOp,
        ids: &[FactorId],
    ) -> Result<(), JointError> {
        self.check_owner(ids, who).map_err(JointError::Ownership)?;
        let pos = self.positions(ids).map_err(JointError::Ownership)?;
        self.state = apply_unitary(&self.state, u, &pos).map_err(JointError::Quantum)?;
        Ok(())
    }

    pub fn measure<R: Rng>(
        &mut self,
        who: Role,
        povm: &Povm,
        ids: &[FactorId],
        rng: &mut R,
    ) -> Result<MeasurementRecord, JointError> {
        self.check_owner(ids, who).map_err(JointError::Ownership)?;
        let pos = self.positions(ids).map_err(JointError::Ownership)?;
        let rec = measure(&self.state, povm, &pos, rng).map_err(JointError::Quantum)?;
        self.state = rec.post_state.clone();
        Ok(rec)
    }

    pub fn transfer(&mut self, ids: &[FactorId], from: Role) -> Result<(), JointError> {
        self.check_owner(ids, from).map_err(JointError::Ownership)?;
        for f in self.factors.iter_mut() {
            if ids.contains(&f.id) {
                f.owner = from.peer();
            }
        }
        Ok(())
    }

    pub fn owned_by(&self, who: Role) -> Vec<FactorId> {
        self.factors
            .iter()
            .filter(|f| f.owner == who)
            .map(|f| f.id)
            .collect()
    }

    /// Current reduced state of the listed factors (any holder).
    pub fn reduced(&self, ids: &[FactorId]) -> Result<crate::quantum::DensityMatrix, JointError> {
        let mut pos = self.positions(ids).map_err(JointError::Ownership)?;
        pos.sort_unstable();
        self.state.partial_trace(&pos).map_err(JointError::Quantum)
    }

    /// Discards everything; used when a lost message restarts the attempt.
    pub fn reset(&mut self) {
        self.factors.clear();
        self.state = StateVector::from_parts_unchecked(
            Vec::new(),
            crate::quantum::CVector::from_vec(vec![num_complex::Complex::new(1.0, 0.0)]),
        );
    }

    pub fn summary(&self) -> String {
        let dims: Vec<String> = self.factors.iter().map(|f| f.dim.to_string()).collect();
        let owners: Vec<&str> = self.factors.iter().map(|f| f.owner.letter()).collect();
        format!(
            "factors={} dims=[{}] owners=[{}]",
            self.factors.len(),
            dims.join(","),
            owners.join(",")
        )
    }
}

impl Default for JointState {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum JointError {
    Ownership(String),
    Quantum(QuantumError),
}
