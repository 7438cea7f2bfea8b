use anneal_core::sweep::sweep_with;
use anneal_core::{AnnealOperator, Complex64, Executor, HamiltonianSpec, Schedule, SweepConfig};

use crate::store::{RunMeta, RunRecord};
use crate::Result;

/// Sweeps `H(s)` and packages the result as a run record. Complex amplitudes
/// are used only when a Hamiltonian has a `Y` factor.
pub fn simulate<E: Executor>(
    hi: &HamiltonianSpec,
    hp: &HamiltonianSpec,
    schedule: &Schedule,
    cfg: &SweepConfig,
    exec: &E,
) -> Result<RunRecord> {
    let op = AnnealOperator::new(hi, hp, schedule.clone())?;
    let complex = !op.is_real();
    let meta = RunMeta::new(op.n_qubits(), complex, cfg, schedule);
    Ok(if complex {
        RunRecord::from_sweep(&sweep_with::<Complex64, E>(&op, cfg, exec)?, hi, hp, meta)
    } else {
        RunRecord::from_sweep(&sweep_with::<f64, E>(&op, cfg, exec)?, hi, hp, meta)
    })
}
