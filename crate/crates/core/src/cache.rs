//! Process-wide memo tables: many concurrent readers, one writer per key.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, OnceLock, RwLock};

pub struct Cache<K, V> {
    map: OnceLock<RwLock<HashMap<K, Arc<V>>>>,
}

impl<K: Eq + Hash + Clone, V> Cache<K, V> {
    pub const fn new() -> Self {
        Cache {
            map: OnceLock::new(),
        }
    }

    /// Returns the cached value for `key`, building it with `init` on a miss.
    ///
    /// `init` runs outside the lock; if two threads race on the same key the
    /// first insertion wins and both callers get that value.
    pub fn get_or_try_insert<E>(
        &self,
        key: &K,
        init: impl FnOnce() -> Result<V, E>,
    ) -> Result<Arc<V>, E> {
        let map = self.map.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(v) = map.read().expect("cache poisoned").get(key) {
            return Ok(Arc::clone(v));
        }
        let value = Arc::new(init()?);
        let mut w = map.write().expect("cache poisoned");
        Ok(Arc::clone(w.entry(key.clone()).or_insert(value)))
    }
}

impl<K: Eq + Hash + Clone, V> Default for Cache<K, V> {
    fn default() -> Self {
        Self::new()
    }
}
