use std::collections::BTreeMap;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use entwine_core::scenario::{new_session, Scenario, Session, SessionSnapshot};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;

/// On-disk form of the whole store.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StoreSnapshot {
    pub sessions: BTreeMap<String, SessionSnapshot>,
}

/// In-memory sessions, each behind its own lock so that requests to one
/// session run one at a time while different sessions proceed in parallel.
#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<BTreeMap<String, Arc<Mutex<Session>>>>,
    counter: AtomicU64,
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn create(
        &self,
        scenario: Arc<Scenario>,
        seed: u64,
    ) -> Result<Arc<Mutex<Session>>, ApiError> {
        let mut map = self.sessions.write().map_err(|_| poisoned())?;
        let id = loop {
            let n = self.counter.fetch_add(1, Ordering::Relaxed) + 1;
            let id = format!("s{n}");
            if !map.contains_key(&id) {
                break id;
            }
        };
        let session = Arc::new(Mutex::new(new_session(scenario, id.clone(), seed)));
        map.insert(id, session.clone());
        Ok(session)
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        let map = self.sessions.read().map_err(|_| poisoned())?;
        map.get(id)
            .cloned()
            .ok_or_else(|| ApiError::unknown_session(id))
    }

    /// Runs `f` with exclusive access to one session.
    pub fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut Session) -> Result<T, ApiError>,
    ) -> Result<T, ApiError> {
        let session = self.get(id)?;
        let mut guard = session.lock().map_err(|_| poisoned())?;
        f(&mut guard)
    }

    pub fn len(&self) -> usize {
        self.sessions.read().map(|m| m.len()).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn snapshot(&self) -> Result<StoreSnapshot, ApiError> {
        let map = self.sessions.read().map_err(|_| poisoned())?;
        let mut sessions = BTreeMap::new();
        for (id, s) in map.iter() {
            sessions.insert(id.clone(), s.lock().map_err(|_| poisoned())?.snapshot());
        }
        Ok(StoreSnapshot { sessions })
    }

    /// Rebuilds every session by replaying its history.
    pub fn restore(snapshot: &StoreSnapshot) -> Result<Self, ApiError> {
        let mut map = BTreeMap::new();
        for (id, snap) in &snapshot.sessions {
            let session = Session::restore(id.clone(), snap)
                .map_err(|e| prefixed_path(ApiError::from(e), &format!("sessions.{id}")))?;
            map.insert(id.clone(), Arc::new(Mutex::new(session)));
        }
        Ok(Self {
            sessions: RwLock::new(map),
            counter: AtomicU64::new(0),
        })
    }

    pub fn load(path: &Path) -> Result<Self, ApiError> {
        let text = std::fs::read(path).map_err(|e| {
            ApiError::validation("snapshot", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::restore(&crate::service::parse_json(&text)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), ApiError> {
        let json = serde_json::to_vec_pretty(&self.snapshot()?)
            .map_err(|e| ApiError::internal(e.to_string()))?;
        std::fs::write(path, json)
            .map_err(|e| ApiError::internal(format!("cannot write {}: {e}", path.display())))
    }
}

fn poisoned() -> ApiError {
    ApiError::internal("session lock poisoned")
}

fn prefixed_path(err: ApiError, prefix: &str) -> ApiError {
    let path = match &err.path {
        Some(p) => format!("{prefix}.{p}"),
        None => prefix.to_string(),
    };
    err.at(path)
}
