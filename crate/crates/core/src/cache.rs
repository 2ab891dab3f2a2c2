//! Process-wide memo cache for expansion constructors.
//!
//! Entries are keyed by exact parameters `(kind, truncation)`. Each entry is
//! computed at most once per process; concurrent requests for the same key
//! block on a per-entry lock rather than on the whole cache, so independent
//! constructors can run in parallel.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::qexp::QExpansion;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CacheKey {
    Block(&'static str, i64),
    Form(&'static str, usize, i64),
    Family(&'static str, usize, i64),
}

struct Entry {
    guard: Mutex<()>,
    value: OnceLock<Arc<Vec<QExpansion>>>,
}

fn table() -> &'static Mutex<HashMap<CacheKey, Arc<Entry>>> {
    static TABLE: OnceLock<Mutex<HashMap<CacheKey, Arc<Entry>>>> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

/// Get-or-compute for a family of expansions under one key.
pub fn cached_family(key: CacheKey, compute: impl FnOnce() -> Vec<QExpansion>) -> Arc<Vec<QExpansion>> {
    let entry = {
        let mut map = table().lock().expect("cache poisoned");
        map.entry(key)
            .or_insert_with(|| {
                Arc::new(Entry {
                    guard: Mutex::new(()),
                    value: OnceLock::new(),
                })
            })
            .clone()
    };
    if let Some(v) = entry.value.get() {
        return v.clone();
    }
    let _held = entry.guard.lock().expect("cache entry poisoned");
    if let Some(v) = entry.value.get() {
        return v.clone();
    }
    let value = Arc::new(compute());
    let _ = entry.value.set(value.clone());
    value
}

/// Get-or-compute for a single expansion.
pub fn cached(key: CacheKey, compute: impl FnOnce() -> QExpansion) -> QExpansion {
    let family = cached_family(key, || vec![compute()]);
    family[0].clone()
}

fn find_at_least(name: &'static str, n: usize, trunc24: i64, family: bool) -> Option<Arc<Vec<QExpansion>>> {
    let map = table().lock().expect("cache poisoned");
    let mut best: Option<(i64, Arc<Entry>)> = None;
    for (key, entry) in map.iter() {
        let (kname, kn, kt) = match key {
            CacheKey::Form(a, b, c) if !family => (*a, *b, *c),
            CacheKey::Family(a, b, c) if family => (*a, *b, *c),
            _ => continue,
        };
        if kname == name && kn == n && kt >= trunc24 && entry.value.get().is_some() {
            match &best {
                Some((t, _)) if *t <= kt => {}
                _ => best = Some((kt, entry.clone())),
            }
        }
    }
    best.and_then(|(_, e)| e.value.get().cloned())
}

/// Like [`cached`], but a stored value with a larger truncation satisfies the
/// request after truncating down, so different precision levels share one
/// computation of the expensive constructors.
pub fn cached_at_least(
    name: &'static str,
    n: usize,
    trunc24: i64,
    compute: impl FnOnce() -> QExpansion,
) -> QExpansion {
    if let Some(found) = find_at_least(name, n, trunc24, false) {
        return found[0].truncated(trunc24).expect("cache truncation");
    }
    let exact = cached(CacheKey::Form(name, n, trunc24), compute);
    exact
}

/// Family version of [`cached_at_least`].
pub fn cached_family_at_least(
    name: &'static str,
    n: usize,
    trunc24: i64,
    compute: impl FnOnce() -> Vec<QExpansion>,
) -> Arc<Vec<QExpansion>> {
    if let Some(found) = find_at_least(name, n, trunc24, true) {
        let cut: Vec<QExpansion> = found
            .iter()
            .map(|f| f.truncated(trunc24).expect("cache truncation"))
            .collect();
        return Arc::new(cut);
    }
    cached_family(CacheKey::Family(name, n, trunc24), compute)
}
