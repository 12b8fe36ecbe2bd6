//! The classical front half of the pipeline for one instance: reduction,
//! Babai rounding and the refinement Hamiltonian.

use crate::error::Result;
use crate::instance::CvpInstance;
use crate::ising::{encode_hamiltonian, IsingModel};
use crate::lattice::{babai_nearest_plane, lll_reduce, BabaiResult, ExactMatrix, Rational};

#[derive(Clone, Debug)]
pub struct Prepared {
    pub instance: CvpInstance,
    pub reduced: ExactMatrix,
    pub babai: BabaiResult,
    pub model: IsingModel,
}

pub fn prepare(instance: &CvpInstance, delta: &Rational) -> Result<Prepared> {
    let lll = lll_reduce(&instance.matrix(), delta)?;
    let babai = babai_nearest_plane(&lll.reduced, &instance.target)?;
    let model = encode_hamiltonian(&lll.reduced, &babai, &instance.target)?;
    Ok(Prepared { instance: instance.clone(), reduced: lll.reduced, babai, model })
}

impl Prepared {
    pub fn n(&self) -> usize {
        self.instance.dim
    }
}
