use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use dashmap::DashMap;
use skytrace_core::ulog::FlightLog;

/// An uploaded log held in memory only.
#[derive(Debug)]
pub struct Session {
    pub log: FlightLog,
    pub created_at: Instant,
    /// Milliseconds since the store's epoch.
    last_access_ms: AtomicU64,
}

/// Concurrent id → session map. Lookups hand out `Arc`s, so eviction
/// never disturbs a request that is already reading a log.
#[derive(Debug)]
pub struct SessionStore {
    sessions: DashMap<String, Arc<Session>>,
    ttl: Duration,
    epoch: Instant,
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        Self {
            sessions: DashMap::new(),
            ttl,
            epoch: Instant::now(),
        }
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    fn now_ms(&self) -> u64 {
        self.epoch.elapsed().as_millis() as u64
    }

    /// Stores the log under a fresh 128-bit random id.
    pub fn insert(&self, log: FlightLog) -> (String, Arc<Session>) {
        let session = Arc::new(Session {
            log,
            created_at: Instant::now(),
            last_access_ms: AtomicU64::new(self.now_ms()),
        });
        loop {
            let id = hex::encode(rand::random::<[u8; 16]>());
            if let dashmap::Entry::Vacant(slot) = self.sessions.entry(id.clone()) {
                slot.insert(session.clone());
                return (id, session);
            }
        }
    }

    /// The live session, refreshing its idle timer.
    pub fn get(&self, id: &str) -> Option<Arc<Session>> {
        let s = self.sessions.get(id)?.clone();
        let now = self.now_ms();
        if now.saturating_sub(s.last_access_ms.load(Ordering::Relaxed)) > self.ttl.as_millis() as u64 {
            return None;
        }
        s.last_access_ms.store(now, Ordering::Relaxed);
        Some(s)
    }

    pub fn remove(&self, id: &str) -> bool {
        self.sessions.remove(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.sessions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sessions.is_empty()
    }

    /// Drops sessions idle for longer than the TTL; returns how many.
    pub fn evict_idle(&self) -> usize {
        let now = self.now_ms();
        let ttl = self.ttl.as_millis() as u64;
        let before = self.sessions.len();
        self.sessions
            .retain(|_, s| now.saturating_sub(s.last_access_ms.load(Ordering::Relaxed)) <= ttl);
        before - self.sessions.len()
    }
}
