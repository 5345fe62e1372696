use serde::{Deserialize, Serialize};

use crate::domain::{ProcessId, ProcessInstance, StepState, UserId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotatedStep {
    pub step_name: String,
    pub responsible_user_id: UserId,
    pub state: StepState,
    pub active: bool,
    pub your_task: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProcessBreakdown {
    pub process_id: ProcessId,
    pub process_type: String,
    pub complete: bool,
    pub steps: Vec<AnnotatedStep>,
}

/// Marks the active step and the steps the viewer is responsible for.
pub fn process_breakdown(instance: &ProcessInstance, viewer: &UserId) -> ProcessBreakdown {
    ProcessBreakdown {
        process_id: instance.id.clone(),
        process_type: instance.process_type.clone(),
        complete: instance.is_complete(),
        steps: instance
            .steps
            .iter()
            .map(|s| AnnotatedStep {
                step_name: s.step_name.clone(),
                responsible_user_id: s.responsible_user_id.clone(),
                state: s.state,
                active: s.state == StepState::Active,
                your_task: &s.responsible_user_id == viewer,
            })
            .collect(),
    }
}
