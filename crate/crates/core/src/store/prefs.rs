use std::collections::BTreeSet;

use super::StoreData;
use crate::domain::{SubjectRef, UserId, WidgetLayout};
use crate::error::{DpwError, Result};

fn resolves(data: &StoreData, subject: &SubjectRef) -> bool {
    match subject {
        SubjectRef::Supplier(id) => data.suppliers.contains_key(id),
        SubjectRef::News(id) => data.news.contains_key(id),
        SubjectRef::Link(id) => data.links.contains_key(id),
    }
}

/// Adds or removes a favorite. Idempotent in both directions; only
/// additions require the subject to exist.
pub fn set_favorite(
    data: &mut StoreData,
    user: &UserId,
    subject: SubjectRef,
    flag: bool,
) -> Result<BTreeSet<SubjectRef>> {
    if flag && !resolves(data, &subject) {
        return Err(DpwError::validation(format!("dangling favorite {subject}")));
    }
    let u = data.user_mut(user)?;
    if flag {
        u.favorites.insert(subject);
    } else {
        u.favorites.remove(&subject);
    }
    Ok(u.favorites.clone())
}

pub fn save_layout(data: &mut StoreData, user: &UserId, layout: WidgetLayout) -> Result<WidgetLayout> {
    layout.validate()?;
    data.user_mut(user)?.layout = Some(layout.clone());
    Ok(layout)
}

/// The user's saved layout, or `default` when none was saved.
pub fn get_layout(data: &StoreData, user: &UserId, default: &WidgetLayout) -> Result<WidgetLayout> {
    Ok(data.user(user)?.layout.clone().unwrap_or_else(|| default.clone()))
}
