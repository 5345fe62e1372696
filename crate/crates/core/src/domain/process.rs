use serde::{Deserialize, Serialize};

use super::{ProcessId, TaskId, UserId};
use crate::error::{DpwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StepState {
    Pending,
    Active,
    Done,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProcessStep {
    pub step_name: String,
    pub responsible_user_id: UserId,
    pub state: StepState,
}

/// A cross-department process broken down into ordered steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProcessInstance {
    pub id: ProcessId,
    pub process_type: String,
    pub steps: Vec<ProcessStep>,
    pub current_step_index: usize,
}

impl ProcessInstance {
    pub fn is_complete(&self) -> bool {
        self.steps.iter().all(|s| s.state == StepState::Done)
    }

    /// Exactly one ACTIVE step (at `current_step_index`) unless every step is
    /// DONE, and everything before the current step is DONE.
    pub fn validate(&self) -> Result<()> {
        if self.steps.is_empty() {
            return Err(DpwError::validation(format!("process {} has no steps", self.id)));
        }
        if self.is_complete() {
            return Ok(());
        }
        let active: Vec<usize> = self
            .steps
            .iter()
            .enumerate()
            .filter(|(_, s)| s.state == StepState::Active)
            .map(|(i, _)| i)
            .collect();
        if active != [self.current_step_index] {
            return Err(DpwError::validation(format!(
                "process {} must have exactly one ACTIVE step at index {}",
                self.id, self.current_step_index
            )));
        }
        if self.steps[..self.current_step_index]
            .iter()
            .any(|s| s.state != StepState::Done)
        {
            return Err(DpwError::validation(format!(
                "process {}: steps before the current step must be DONE",
                self.id
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TaskState {
    Open,
    Done,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Task {
    pub id: TaskId,
    pub assignee_user_id: UserId,
    #[serde(default)]
    pub process_ref: Option<ProcessId>,
    pub title: String,
    pub state: TaskState,
}
