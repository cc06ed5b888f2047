//! A compact NSGA-II: binary tournaments on (feasibility, rank, crowding),
//! simulated binary crossover, polynomial mutation and constraint domination.

use std::cmp::Ordering;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::trace::{HvReference, Recorder};
use super::RunResult;
use crate::dominance::ObjectivePair;
use crate::error::{CobiError, Result};
use crate::linalg::Point;
use crate::problem::{CobiProblem, SearchBox};

const CROSSOVER_PROB: f64 = 0.9;
const ETA_CROSSOVER: f64 = 15.0;
const ETA_MUTATION: f64 = 20.0;

#[derive(Clone, Debug)]
struct Individual {
    x: Point,
    f: ObjectivePair,
    violation: f64,
    rank: usize,
    crowding: f64,
}

impl Individual {
    fn feasible(&self) -> bool {
        self.violation <= crate::constraint::FEASIBILITY_TOL
    }
}

/// Feasible beats infeasible, smaller violation beats larger, and among
/// feasible points Pareto dominance decides.
fn constrained_dominates(a: &Individual, b: &Individual) -> bool {
    match (a.feasible(), b.feasible()) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => a.violation < b.violation,
        (true, true) => a.f.f1 <= b.f.f1 && a.f.f2 <= b.f.f2 && (a.f.f1 < b.f.f1 || a.f.f2 < b.f.f2),
    }
}

/// Assigns ranks and returns the fronts, best first.
fn nondominated_sort(pop: &mut [Individual]) -> Vec<Vec<usize>> {
    let m = pop.len();
    let mut dominated_by = vec![0usize; m];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..m {
        for j in (i + 1)..m {
            if constrained_dominates(&pop[i], &pop[j]) {
                dominates[i].push(j);
                dominated_by[j] += 1;
            } else if constrained_dominates(&pop[j], &pop[i]) {
                dominates[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..m).filter(|&i| dominated_by[i] == 0).collect();
    let mut rank = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            pop[i].rank = rank;
            for &j in &dominates[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        fronts.push(current);
        current = next;
        rank += 1;
    }
    fronts
}

fn assign_crowding(pop: &mut [Individual], front: &[usize]) {
    for &i in front {
        pop[i].crowding = 0.0;
    }
    if front.len() <= 2 {
        for &i in front {
            pop[i].crowding = f64::INFINITY;
        }
        return;
    }
    for obj in 0..2 {
        let val = |ind: &Individual| if obj == 0 { ind.f.f1 } else { ind.f.f2 };
        let mut order = front.to_vec();
        order.sort_by(|&a, &b| val(&pop[a]).total_cmp(&val(&pop[b])));
        let lo = val(&pop[order[0]]);
        let hi = val(&pop[*order.last().unwrap()]);
        pop[order[0]].crowding = f64::INFINITY;
        pop[*order.last().unwrap()].crowding = f64::INFINITY;
        let span = hi - lo;
        if !(span > 0.0) || !span.is_finite() {
            continue;
        }
        for k in 1..order.len() - 1 {
            let d = (val(&pop[order[k + 1]]) - val(&pop[order[k - 1]])) / span;
            pop[order[k]].crowding += d;
        }
    }
}

fn better(a: &Individual, b: &Individual) -> bool {
    match (a.feasible(), b.feasible()) {
        (true, false) => return true,
        (false, true) => return false,
        (false, false) => return a.violation < b.violation,
        _ => {}
    }
    match a.rank.cmp(&b.rank) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => a.crowding > b.crowding,
    }
}

fn tournament<'p>(pop: &'p [Individual], rng: &mut ChaCha20Rng) -> &'p Individual {
    let a = &pop[rng.random_range(0..pop.len())];
    let b = &pop[rng.random_range(0..pop.len())];
    if better(b, a) {
        b
    } else {
        a
    }
}

fn sbx(p1: &Point, p2: &Point, bx: &SearchBox, rng: &mut ChaCha20Rng) -> (Point, Point) {
    let mut c1 = p1.clone();
    let mut c2 = p2.clone();
    if rng.random::<f64>() > CROSSOVER_PROB {
        return (c1, c2);
    }
    for i in 0..p1.len() {
        if rng.random::<f64>() > 0.5 || (p1[i] - p2[i]).abs() < 1e-14 {
            continue;
        }
        let (y1, y2) = if p1[i] < p2[i] { (p1[i], p2[i]) } else { (p2[i], p1[i]) };
        let (lo, hi) = (bx.lower[i], bx.upper[i]);
        let u: f64 = rng.random();
        let spread = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(ETA_CROSSOVER + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (ETA_CROSSOVER + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (ETA_CROSSOVER + 1.0))
            }
        };
        let bq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
        let bq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
        let mut a = (0.5 * ((y1 + y2) - bq1 * (y2 - y1))).clamp(lo, hi);
        let mut b = (0.5 * ((y1 + y2) + bq2 * (y2 - y1))).clamp(lo, hi);
        if rng.random::<f64>() < 0.5 {
            std::mem::swap(&mut a, &mut b);
        }
        c1[i] = a;
        c2[i] = b;
    }
    (c1, c2)
}

fn mutate(x: &mut Point, bx: &SearchBox, rng: &mut ChaCha20Rng) {
    let n = x.len();
    let pm = 1.0 / n as f64;
    for i in 0..n {
        if rng.random::<f64>() >= pm {
            continue;
        }
        let (lo, hi) = (bx.lower[i], bx.upper[i]);
        let width = hi - lo;
        let (d1, d2) = ((x[i] - lo) / width, (hi - x[i]) / width);
        let u: f64 = rng.random();
        let power = 1.0 / (ETA_MUTATION + 1.0);
        let dq = if u < 0.5 {
            let v = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(ETA_MUTATION + 1.0);
            v.powf(power) - 1.0
        } else {
            let v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(ETA_MUTATION + 1.0);
            1.0 - v.powf(power)
        };
        x[i] = (x[i] + dq * width).clamp(lo, hi);
    }
}

/// Runs NSGA-II within the problem's search box.
pub fn run_nsga2_lite(
    prob: &CobiProblem,
    reference: &HvReference,
    population: usize,
    budget: usize,
    seed: u64,
) -> Result<RunResult> {
    if population < 2 || budget < population {
        return Err(CobiError::InvalidArgument(format!(
            "need population >= 2 and budget >= population, got {population} and {budget}"
        )));
    }
    let bx = prob.search_box().clone();
    let n = prob.dim();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut rec = Recorder::new(prob, reference, budget);

    let mut pop: Vec<Individual> = (0..population)
        .map(|_| {
            let x = DVector::from_fn(n, |i, _| rng.random_range(bx.lower[i]..=bx.upper[i]));
            let (f, violation) = rec.evaluate(&x);
            Individual { x, f, violation, rank: 0, crowding: 0.0 }
        })
        .collect();
    for front in nondominated_sort(&mut pop) {
        assign_crowding(&mut pop, &front);
    }

    while rec.evals < budget {
        let mut offspring = Vec::with_capacity(population);
        while offspring.len() < population && rec.evals < budget {
            let (a, b) = (tournament(&pop, &mut rng).x.clone(), tournament(&pop, &mut rng).x.clone());
            let (mut c1, mut c2) = sbx(&a, &b, &bx, &mut rng);
            mutate(&mut c1, &bx, &mut rng);
            mutate(&mut c2, &bx, &mut rng);
            for x in [c1, c2] {
                if offspring.len() < population && rec.evals < budget {
                    let (f, violation) = rec.evaluate(&x);
                    offspring.push(Individual { x, f, violation, rank: 0, crowding: 0.0 });
                }
            }
        }
        pop.extend(offspring);
        let fronts = nondominated_sort(&mut pop);
        let mut keep = Vec::with_capacity(population);
        for front in fronts {
            assign_crowding(&mut pop, &front);
            if keep.len() + front.len() <= population {
                keep.extend(front);
            } else {
                let mut rest = front;
                rest.sort_by(|&a, &b| pop[b].crowding.total_cmp(&pop[a].crowding).then(a.cmp(&b)));
                keep.extend(rest.into_iter().take(population - keep.len()));
                break;
            }
        }
        let mut next: Vec<Individual> = keep.iter().map(|&i| pop[i].clone()).collect();
        for front in nondominated_sort(&mut next) {
            assign_crowding(&mut next, &front);
        }
        pop = next;
    }
    let (trace, archive) = rec.finish("nsga2lite", seed, budget);
    Ok(RunResult { trace, archive })
}
