// Copyright 2026 The ergokit Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixed extraction and injection protocols and their worst-case behaviour.

mod channel;
mod dual;
mod gibbs;
mod qutrit;

pub use channel::{apply, delta_e, u_rev, Channel, RandomUnitaryChannel, UnitaryChannel};
pub use dual::{energy_change_operator, worst_case_delta_e, WorstCaseResult};
pub use gibbs::{gibbs_state, pinsker_lower_bound, GibbsState};
pub use qutrit::{
    adversarial_coherent_state, qutrit_coherence_penalty, qutrit_diag_optimal_unitary, qutrit_min_ergotropy,
    qutrit_penalty_segment, qutrit_q_bar, qutrit_random_unitary_channel, qutrit_worst_diag_optimal,
    qutrit_worst_rev, Phases,
};
