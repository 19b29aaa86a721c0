use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Weight;

/// Mass moved from source `source` to sink `sink`, with the per-unit cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowEntry {
    pub source: usize,
    pub sink: usize,
    pub flow: Weight,
    pub cost: f64,
}

/// An optimal transportation plan and its total cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowPlan {
    pub entries: Vec<FlowEntry>,
    pub cost: f64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_distribution(weights: &[Weight], side: &str) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::EmptyInput);
    }
    let total: Weight = weights.iter().sum();
    if total != Ratio::from_integer(1) {
        return Err(Error::InvalidDistribution(format!(
            "{side} weights sum to {total}, expected 1"
        )));
    }
    Ok(())
}

/// Residual network of a transportation problem in integer units.
/// Nodes: 0 is the source, then the sources, then the sinks, then the sink.
struct Network {
    ns: usize,
    nt: usize,
    supply: Vec<u64>,
    demand: Vec<u64>,
    sent: Vec<u64>,
    received: Vec<u64>,
    flow: Vec<Vec<u64>>,
    cost: Vec<Vec<f64>>,
}

/// Strict-improvement margin for shortest-path relaxation.
const RELAX_EPS: f64 = 1e-12;

impl Network {
    /// Bellman-Ford from the super source over the residual graph. Returns
    /// the predecessor of every node on a cheapest augmenting path.
    fn shortest_path(&self) -> Option<Vec<Option<usize>>> {
        let (ns, nt) = (self.ns, self.nt);
        let nodes = ns + nt + 2;
        let sink = nodes - 1;
        let mut dist = vec![f64::INFINITY; nodes];
        let mut pred: Vec<Option<usize>> = vec![None; nodes];
        dist[0] = 0.0;
        for _ in 0..nodes {
            let mut changed = false;
            let mut relax = |from: usize, to: usize, w: f64, dist: &mut Vec<f64>, pred: &mut Vec<Option<usize>>| {
                if dist[from].is_finite() && dist[from] + w < dist[to] - RELAX_EPS {
                    dist[to] = dist[from] + w;
                    pred[to] = Some(from);
                    changed = true;
                }
            };
            for i in 0..ns {
                let u = 1 + i;
                if self.sent[i] < self.supply[i] {
                    relax(0, u, 0.0, &mut dist, &mut pred);
                }
                for j in 0..nt {
                    let v = 1 + ns + j;
                    relax(u, v, self.cost[i][j], &mut dist, &mut pred);
                    if self.flow[i][j] > 0 {
                        relax(v, u, -self.cost[i][j], &mut dist, &mut pred);
                    }
                }
            }
            for j in 0..nt {
                if self.received[j] < self.demand[j] {
                    relax(1 + ns + j, sink, 0.0, &mut dist, &mut pred);
                }
            }
            if !changed {
                break;
            }
        }
        dist[sink].is_finite().then_some(pred)
    }

    fn augment(&mut self, pred: &[Option<usize>]) {
        let ns = self.ns;
        let sink = ns + self.nt + 1;
        let mut path = vec![sink];
        let mut node = sink;
        while let Some(p) = pred[node] {
            path.push(p);
            node = p;
            if node == 0 {
                break;
            }
        }
        path.reverse();
        let mut amount = u64::MAX;
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            let cap = if a == 0 {
                self.supply[b - 1] - self.sent[b - 1]
            } else if b == sink {
                self.demand[a - 1 - ns] - self.received[a - 1 - ns]
            } else if a <= ns {
                u64::MAX
            } else {
                self.flow[b - 1][a - 1 - ns]
            };
            amount = amount.min(cap);
        }
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a == 0 {
                self.sent[b - 1] += amount;
            } else if b == sink {
                self.received[a - 1 - ns] += amount;
            } else if a <= ns {
                self.flow[a - 1][b - 1 - ns] += amount;
            } else {
                self.flow[b - 1][a - 1 - ns] -= amount;
            }
        }
    }
}

/// Exact Earth Mover's Distance between two rational distributions under
/// the given ground costs, by successive shortest paths on integer units.
pub fn emd(source: &[Weight], sink: &[Weight], cost: &[Vec<f64>]) -> Result<FlowPlan> {
    check_distribution(source, "source")?;
    check_distribution(sink, "sink")?;
    if cost.len() != source.len() {
        return Err(Error::SizeMismatch {
            left: cost.len(),
            right: source.len(),
        });
    }
    for row in cost {
        if row.len() != sink.len() {
            return Err(Error::SizeMismatch {
                left: row.len(),
                right: sink.len(),
            });
        }
        if row.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidDistribution(
                "costs must be finite and non-negative".into(),
            ));
        }
    }
    let unit = source
        .iter()
        .chain(sink)
        .fold(1u64, |acc, w| acc / gcd(acc, *w.denom()) * w.denom());
    let to_units = |w: &Weight| w.numer() * (unit / w.denom());
    let mut net = Network {
        ns: source.len(),
        nt: sink.len(),
        supply: source.iter().map(to_units).collect(),
        demand: sink.iter().map(to_units).collect(),
        sent: vec![0; source.len()],
        received: vec![0; sink.len()],
        flow: vec![vec![0; sink.len()]; source.len()],
        cost: cost.to_vec(),
    };
    while net.sent.iter().sum::<u64>() < unit {
        let pred = net
            .shortest_path()
            .expect("balanced transportation problems stay feasible");
        net.augment(&pred);
    }
    let mut entries = Vec::new();
    let mut total = 0.0;
    for (i, row) in cost.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            let units = net.flow[i][j];
            if units > 0 {
                let flow = Weight::new(units, unit);
                total += units as f64 / unit as f64 * c;
                entries.push(FlowEntry {
                    source: i,
                    sink: j,
                    flow,
                    cost: c,
                });
            }
        }
    }
    Ok(FlowPlan {
        entries,
        cost: total,
    })
}
