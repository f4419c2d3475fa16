use serde::{Deserialize, Serialize};

use super::{AdjacencyTest, DdState, StepStats};
use crate::error::Result;
use crate::int::Int;
use crate::model::Cone;
use crate::order::{dynamic_next, InsertionOrder};

#[derive(Clone, Debug, Default)]
pub struct DdOptions {
    /// Stop once this many rows (initial simplex included) are processed.
    pub stop_after: Option<usize>,
    /// Give up when an intermediate cone has more rays than this.
    pub max_rays: Option<usize>,
    /// Rows never inserted.
    pub exclude: Vec<usize>,
    pub adjacency: AdjacencyTest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Complete,
    Stopped,
    BudgetExhausted,
}

/// `|R_i|` after `processed` rows; `row` is the row inserted last (none for
/// the initial simplex).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub processed: usize,
    pub row: Option<usize>,
    pub rays: usize,
}

#[derive(Clone, Debug)]
pub struct DdRun<N> {
    pub state: DdState<N>,
    /// Row indices in insertion order.
    pub processed: Vec<usize>,
    pub trajectory: Vec<TrajectoryPoint>,
    pub status: RunStatus,
}

pub fn run_dd<N: Int>(cone: &Cone<N>, order: &InsertionOrder, opts: &DdOptions) -> Result<DdRun<N>> {
    run_dd_with(cone, order, opts, |_, _| {})
}

/// As [`run_dd`], calling `observe` after the initial simplex and after
/// every step.
pub fn run_dd_with<N: Int, F>(cone: &Cone<N>, order: &InsertionOrder, opts: &DdOptions, mut observe: F) -> Result<DdRun<N>>
where
    F: FnMut(&TrajectoryPoint, Option<&StepStats>),
{
    let m = cone.num_rows();
    let candidates: Vec<usize> = match order.rows() {
        Some(rows) => rows.to_vec(),
        None => (0..m).collect(),
    };
    let candidates: Vec<usize> = candidates.into_iter().filter(|r| !opts.exclude.contains(r)).collect();
    let (mut state, chosen) = DdState::initial(cone, candidates.iter().copied())?;
    let mut remaining: Vec<usize> = candidates.into_iter().filter(|r| !chosen.contains(r)).collect();
    let mut processed = chosen;
    let first = TrajectoryPoint {
        processed: processed.len(),
        row: None,
        rays: state.len(),
    };
    observe(&first, None);
    let mut trajectory = vec![first];

    let status = loop {
        if remaining.is_empty() {
            break RunStatus::Complete;
        }
        if opts.stop_after.is_some_and(|k| processed.len() >= k) {
            break RunStatus::Stopped;
        }
        let row = if order.is_dynamic() {
            let r = dynamic_next(&state, cone.rows(), &remaining, order.kind())?;
            remaining.retain(|&x| x != r);
            r
        } else {
            remaining.remove(0)
        };
        let (next, stats) = state.step(cone.row(row), opts.adjacency)?;
        state = next;
        processed.push(row);
        let point = TrajectoryPoint {
            processed: processed.len(),
            row: Some(row),
            rays: state.len(),
        };
        observe(&point, Some(&stats));
        trajectory.push(point);
        if opts.max_rays.is_some_and(|b| state.len() > b) {
            break RunStatus::BudgetExhausted;
        }
    };
    Ok(DdRun {
        state,
        processed,
        trajectory,
        status,
    })
}
