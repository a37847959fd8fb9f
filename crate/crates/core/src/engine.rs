//! Shared memo tables and execution settings.

use std::sync::Arc;

use dashmap::DashMap;

use crate::exact::Rational;
use crate::graphs::StableGraph;
use crate::par::Mode;
use crate::strata::TautClass;

pub(crate) type PsiKey = (u32, Vec<u32>);
pub(crate) type ChKey = (u32, Vec<u32>, Vec<u32>);
pub(crate) type PixtonKey = (u32, usize, Vec<i64>, u32);

/// Owner of all memoized intersection numbers and formula outputs. Safe to
/// share between threads.
#[derive(Default)]
pub struct Engine {
    mode: Mode,
    pub(crate) psi_memo: DashMap<PsiKey, Rational>,
    pub(crate) ch_memo: DashMap<ChKey, Rational>,
    pub(crate) kappa_memo: DashMap<(u32, Vec<u32>, Vec<u32>, Vec<u32>), Rational>,
    pub(crate) pixton_memo: DashMap<PixtonKey, Arc<TautClass>>,
    pub(crate) graph_memo: DashMap<(u32, usize), Arc<Vec<StableGraph>>>,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_mode(mode: Mode) -> Self {
        Engine {
            mode,
            ..Self::default()
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn stable_graphs(&self, g: u32, n: usize) -> crate::error::Result<Arc<Vec<StableGraph>>> {
        if let Some(v) = self.graph_memo.get(&(g, n)) {
            return Ok(v.clone());
        }
        let gs = Arc::new(crate::graphs::enumerate_stable(g, n)?);
        self.graph_memo.insert((g, n), gs.clone());
        Ok(gs)
    }

    /// Number of memoized intersection numbers.
    pub fn memo_size(&self) -> usize {
        self.psi_memo.len() + self.ch_memo.len() + self.kappa_memo.len()
    }
}
