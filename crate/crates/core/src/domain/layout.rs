use serde::{Deserialize, Serialize};

use crate::error::{DpwError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LayoutEntry {
    pub widget_id: String,
    pub x: u32,
    pub y: u32,
    pub width: u32,
    pub height: u32,
}

impl LayoutEntry {
    pub fn new(widget_id: impl Into<String>, x: u32, y: u32, width: u32, height: u32) -> Self {
        LayoutEntry {
            widget_id: widget_id.into(),
            x,
            y,
            width,
            height,
        }
    }

    fn overlaps(&self, other: &LayoutEntry) -> bool {
        let x_end = u64::from(self.x) + u64::from(self.width);
        let y_end = u64::from(self.y) + u64::from(self.height);
        let ox_end = u64::from(other.x) + u64::from(other.width);
        let oy_end = u64::from(other.y) + u64::from(other.height);
        u64::from(self.x) < ox_end
            && u64::from(other.x) < x_end
            && u64::from(self.y) < oy_end
            && u64::from(other.y) < y_end
    }
}

/// Widget positions on the dashboard grid, in grid units.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WidgetLayout {
    pub entries: Vec<LayoutEntry>,
}

impl WidgetLayout {
    pub fn new(entries: Vec<LayoutEntry>) -> Self {
        WidgetLayout { entries }
    }

    /// Rejects zero-sized entries, duplicate widgets, and overlapping cells.
    /// The error details list every colliding pair as `a/b`.
    pub fn validate(&self) -> Result<()> {
        for e in &self.entries {
            if e.width < 1 || e.height < 1 {
                return Err(DpwError::validation(format!(
                    "widget {} must be at least 1x1",
                    e.widget_id
                )));
            }
        }
        let mut collisions = Vec::new();
        for (i, a) in self.entries.iter().enumerate() {
            for b in &self.entries[i + 1..] {
                if a.widget_id == b.widget_id {
                    return Err(DpwError::validation(format!(
                        "widget {} appears twice",
                        a.widget_id
                    )));
                }
                if a.overlaps(b) {
                    collisions.push(format!("{}/{}", a.widget_id, b.widget_id));
                }
            }
        }
        if collisions.is_empty() {
            Ok(())
        } else {
            Err(DpwError::validation_with(
                format!("overlapping widgets: {}", collisions.join(", ")),
                collisions,
            ))
        }
    }
}
