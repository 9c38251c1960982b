//! Deterministic parallel execution of independent per-part tasks.
//!
//! Tasks are assigned to workers by a static round-robin schedule and the
//! results are returned in task order, so any reduction the caller performs
//! over them is bitwise identical to a sequential run regardless of the
//! worker count.

use std::panic::{catch_unwind, AssertUnwindSafe};

use crate::error::{CoreError, Result};

/// Static round-robin assignment of `task_count` tasks to workers.
#[derive(Debug, Clone)]
pub struct TaskPlan {
    pub worker_count: usize,
    /// `assignments[w]` lists the task indices owned by worker `w`.
    pub assignments: Vec<Vec<usize>>,
}

impl TaskPlan {
    pub fn new(worker_count: usize, task_count: usize) -> Self {
        let workers = worker_count.max(1).min(task_count.max(1));
        let mut assignments = vec![Vec::new(); workers];
        for k in 0..task_count {
            assignments[k % workers].push(k);
        }
        Self {
            worker_count: workers,
            assignments,
        }
    }
}

type Task<'env, R> = Box<dyn FnOnce() -> R + Send + 'env>;

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".to_string()
    }
}

/// Runs independent tasks and returns their results in task order.
///
/// With `worker_count <= 1` the tasks run inline; otherwise each worker owns
/// the tasks the round-robin plan assigns to it and the spawning scope acts
/// as the barrier before results are assembled. A panicking task surfaces as
/// an error naming the failing index.
pub fn run_parallel<'env, R: Send>(
    tasks: Vec<Task<'env, R>>,
    worker_count: usize,
) -> Result<Vec<R>> {
    let count = tasks.len();
    if count == 0 {
        return Ok(Vec::new());
    }

    if worker_count <= 1 || count == 1 {
        let mut out = Vec::with_capacity(count);
        for (k, task) in tasks.into_iter().enumerate() {
            match catch_unwind(AssertUnwindSafe(task)) {
                Ok(r) => out.push(r),
                Err(p) => {
                    return Err(CoreError::TaskPanicked {
                        task: k,
                        message: panic_message(p),
                    })
                }
            }
        }
        return Ok(out);
    }

    let plan = TaskPlan::new(worker_count, count);
    let mut buckets: Vec<Vec<(usize, Task<'env, R>)>> =
        (0..plan.worker_count).map(|_| Vec::new()).collect();
    for (k, task) in tasks.into_iter().enumerate() {
        buckets[k % plan.worker_count].push((k, task));
    }

    let mut slots: Vec<Option<R>> = (0..count).map(|_| None).collect();
    let mut failure: Option<CoreError> = None;

    std::thread::scope(|scope| {
        let handles: Vec<_> = buckets
            .into_iter()
            .map(|bucket| {
                scope.spawn(move || {
                    bucket
                        .into_iter()
                        .map(|(k, task)| (k, catch_unwind(AssertUnwindSafe(task))))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            match handle.join() {
                Ok(results) => {
                    for (k, r) in results {
                        match r {
                            Ok(v) => slots[k] = Some(v),
                            Err(p) => {
                                if failure.is_none() {
                                    failure = Some(CoreError::TaskPanicked {
                                        task: k,
                                        message: panic_message(p),
                                    });
                                }
                            }
                        }
                    }
                }
                Err(p) => {
                    if failure.is_none() {
                        failure = Some(CoreError::TaskPanicked {
                            task: usize::MAX,
                            message: panic_message(p),
                        });
                    }
                }
            }
        }
    });

    if let Some(err) = failure {
        return Err(err);
    }
    Ok(slots
        .into_iter()
        .map(|s| s.expect("every task owns exactly one slot"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_covers_every_task_once() {
        let plan = TaskPlan::new(3, 8);
        let mut seen = [0usize; 8];
        for bucket in &plan.assignments {
            for &k in bucket {
                seen[k] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let make_tasks = || -> Vec<Task<'static, f64>> {
            (0..7)
                .map(|k| {
                    Box::new(move || {
                        let mut acc = 0.0f64;
                        for i in 0..1000 {
                            acc += ((k * 1000 + i) as f64).sin();
                        }
                        acc
                    }) as Task<'static, f64>
                })
                .collect()
        };
        let seq = run_parallel(make_tasks(), 1).unwrap();
        for workers in [2, 4, 8] {
            let par = run_parallel(make_tasks(), workers).unwrap();
            assert_eq!(seq.len(), par.len());
            for (a, b) in seq.iter().zip(par.iter()) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn panic_reports_failing_task() {
        let tasks: Vec<Task<'static, usize>> = (0..4usize)
            .map(|k| {
                Box::new(move || {
                    if k == 2 {
                        panic!("boom in task {k}");
                    }
                    k
                }) as Task<'static, usize>
            })
            .collect();
        match run_parallel(tasks, 4) {
            Err(CoreError::TaskPanicked { task: 2, message }) => {
                assert!(message.contains("boom"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn more_workers_than_tasks_is_fine() {
        let tasks: Vec<Task<'static, usize>> =
            (0..2usize).map(|k| Box::new(move || k) as Task<'static, usize>).collect();
        assert_eq!(run_parallel(tasks, 16).unwrap(), vec![0, 1]);
    }
}
