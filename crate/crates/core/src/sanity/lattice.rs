//! Parallel search of a subset lattice for its minimal inconsistent sets.
//!
//! Sets grow upward from consistent sets and shrink downward from
//! inconsistent ones. Every set is queued at most once; a queued set whose
//! verdict follows from an earlier check (it is a subset of a consistent
//! set or a superset of an inconsistent one) is resolved without a check.

use std::collections::{HashMap, VecDeque};
use std::sync::{Condvar, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) type Set = Vec<usize>;

const UP: u8 = 1;
const DOWN: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Undecided,
}

/// One satisfiability check as performed by the engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    /// Requirement indices checked.
    pub set: Vec<usize>,
    /// The redundancy target, if this check belongs to a redundancy search.
    pub target: Option<usize>,
    pub verdict: Verdict,
    /// Number of lattice checks of the same search completed when this one
    /// was dispatched.
    pub completed_before: usize,
    /// Post-hoc consistency check of a redundancy witness.
    pub witness_check: bool,
}

pub(crate) struct Lattice<'a> {
    pub n: usize,
    pub is_candidate: &'a (dyn Fn(&[usize]) -> bool + Sync),
    pub up_roots: Vec<Set>,
    /// The maximal candidate sets.
    pub down_roots: Vec<Set>,
    /// `Ok(true)` if the set is consistent.
    pub check: &'a (dyn Fn(&[usize]) -> Result<bool> + Sync),
    pub jobs: usize,
}

pub(crate) struct Outcome {
    pub minimal_inconsistent: Vec<Set>,
    pub undecided: Vec<(Set, String)>,
    /// Checks in completion order.
    pub log: Vec<(Set, Verdict, usize)>,
}

enum Status {
    Queued,
    InFlight,
    Done(Verdict),
}

struct Entry {
    status: Status,
    dirs: u8,
    expanded: u8,
}

struct Shared {
    pool: VecDeque<Set>,
    registry: HashMap<Set, Entry>,
    con: Vec<Set>,
    incon: Vec<Set>,
    in_flight: usize,
    log: Vec<(Set, Verdict, usize)>,
    undecided: Vec<(Set, String)>,
    fatal: Option<Error>,
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Keeps the sets that have no proper subset in the family, sorted.
pub(crate) fn minimal_elements(family: &[Set]) -> Vec<Set> {
    let mut out: Vec<Set> = family
        .iter()
        .filter(|s| !family.iter().any(|t| t.len() < s.len() && is_subset(t, s)))
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    out
}

impl Lattice<'_> {
    pub fn run(&self) -> Result<Outcome> {
        let mut shared = Shared {
            pool: VecDeque::new(),
            registry: HashMap::new(),
            con: Vec::new(),
            incon: Vec::new(),
            in_flight: 0,
            log: Vec::new(),
            undecided: Vec::new(),
            fatal: None,
        };
        let mut work = Vec::new();
        for root in &self.down_roots {
            self.request(&mut shared, root.clone(), DOWN, &mut work);
        }
        for root in &self.up_roots {
            self.request(&mut shared, root.clone(), UP, &mut work);
        }
        let state = Mutex::new(shared);
        let wake = Condvar::new();
        let jobs = self.jobs.max(1);
        if jobs == 1 {
            self.worker(&state, &wake);
        } else {
            std::thread::scope(|scope| {
                for _ in 0..jobs {
                    scope.spawn(|| self.worker(&state, &wake));
                }
            });
        }
        let shared = state.into_inner().expect("lattice lock poisoned");
        if let Some(e) = shared.fatal {
            return Err(e);
        }
        let mut undecided = shared.undecided;
        undecided.sort();
        Ok(Outcome {
            minimal_inconsistent: minimal_elements(&shared.incon),
            undecided,
            log: shared.log,
        })
    }

    fn worker(&self, state: &Mutex<Shared>, wake: &Condvar) {
        let mut guard = state.lock().expect("lattice lock poisoned");
        loop {
            if guard.fatal.is_some() {
                break;
            }
            let Some(set) = guard.pool.pop_front() else {
                if guard.in_flight == 0 {
                    break;
                }
                guard = wake.wait(guard).expect("lattice lock poisoned");
                continue;
            };
            let inferred = if guard.con.iter().any(|c| is_subset(&set, c)) {
                Some(Verdict::Consistent)
            } else if guard.incon.iter().any(|i| is_subset(i, &set)) {
                Some(Verdict::Inconsistent)
            } else {
                None
            };
            let verdict = match inferred {
                Some(v) => v,
                None => {
                    let dispatched = guard.log.len();
                    guard.registry.get_mut(&set).expect("queued set").status = Status::InFlight;
                    guard.in_flight += 1;
                    drop(guard);
                    let result = (self.check)(&set);
                    guard = state.lock().expect("lattice lock poisoned");
                    guard.in_flight -= 1;
                    let v = match result {
                        Ok(true) => Verdict::Consistent,
                        Ok(false) => Verdict::Inconsistent,
                        Err(e) if e.is_capacity() => {
                            guard.undecided.push((set.clone(), e.to_string()));
                            Verdict::Undecided
                        }
                        Err(e) => {
                            guard.fatal.get_or_insert(e);
                            wake.notify_all();
                            break;
                        }
                    };
                    guard.log.push((set.clone(), v, dispatched));
                    match v {
                        Verdict::Consistent => guard.con.push(set.clone()),
                        Verdict::Inconsistent => guard.incon.push(set.clone()),
                        Verdict::Undecided => {}
                    }
                    v
                }
            };
            self.settle(&mut guard, set, verdict);
            wake.notify_all();
        }
        wake.notify_all();
    }

    /// Records a verdict and performs the expansions requested so far.
    fn settle(&self, sh: &mut Shared, set: Set, verdict: Verdict) {
        let entry = sh.registry.get_mut(&set).expect("settled set is registered");
        entry.status = Status::Done(verdict);
        let pending = entry.dirs & !entry.expanded;
        entry.expanded |= pending;
        let mut work: Vec<(Set, u8)> = Vec::new();
        for dir in [UP, DOWN] {
            if pending & dir != 0 {
                work.push((set.clone(), dir));
            }
        }
        while let Some((s, dir)) = work.pop() {
            let v = match sh.registry[&s].status {
                Status::Done(v) => v,
                _ => unreachable!("only settled sets are expanded"),
            };
            for child in self.children(sh, &s, v, dir) {
                self.request(sh, child, dir, &mut work);
            }
        }
    }

    fn request(&self, sh: &mut Shared, set: Set, dir: u8, work: &mut Vec<(Set, u8)>) {
        match sh.registry.get_mut(&set) {
            None => {
                sh.registry.insert(
                    set.clone(),
                    Entry {
                        status: Status::Queued,
                        dirs: dir,
                        expanded: 0,
                    },
                );
                sh.pool.push_back(set);
            }
            Some(e) => match e.status {
                Status::Queued | Status::InFlight => e.dirs |= dir,
                Status::Done(_) => {
                    if e.expanded & dir == 0 {
                        e.expanded |= dir;
                        e.dirs |= dir;
                        work.push((set, dir));
                    }
                }
            },
        }
    }

    fn children(&self, sh: &Shared, set: &[usize], verdict: Verdict, dir: u8) -> Vec<Set> {
        let mut out = Vec::new();
        match (dir, verdict) {
            (UP, Verdict::Consistent) => {
                for i in 0..self.n {
                    if set.binary_search(&i).is_ok() {
                        continue;
                    }
                    let mut sup = set.to_vec();
                    let pos = sup.binary_search(&i).unwrap_err();
                    sup.insert(pos, i);
                    if !(self.is_candidate)(&sup) || sh.incon.iter().any(|x| is_subset(x, &sup)) {
                        continue;
                    }
                    // Nothing above `sup` can be inconsistent once every
                    // maximal candidate containing it is known consistent.
                    let settled = self
                        .down_roots
                        .iter()
                        .filter(|m| is_subset(&sup, m))
                        .all(|m| sh.con.contains(m));
                    if settled {
                        continue;
                    }
                    out.push(sup);
                }
            }
            (DOWN, Verdict::Inconsistent) => {
                for k in 0..set.len() {
                    let mut sub = set.to_vec();
                    sub.remove(k);
                    if !(self.is_candidate)(&sub) || sh.con.iter().any(|c| is_subset(&sub, c)) {
                        continue;
                    }
                    out.push(sub);
                }
            }
            _ => {}
        }
        out
    }
}
