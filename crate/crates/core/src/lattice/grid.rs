//! Flat index space used by the enumerators.
//!
//! Sites within L¹-radius `r` of the origin map to `0..w^d` with the first
//! coordinate most significant, so index order is the lexicographic site
//! order and `(min, max)` index pairs sort edges canonically.

use super::{Edge, Site};

#[derive(Clone, Debug)]
pub(crate) struct Grid {
    d: usize,
    w: usize,
    off: i64,
    steps: [isize; 4],
}

impl Grid {
    pub fn new(d: usize, radius: usize) -> Grid {
        debug_assert!(d == 1 || d == 2);
        let w = 2 * radius + 3;
        let off = radius as i64 + 1;
        let steps = if d == 1 { [1, -1, 0, 0] } else { [w as isize, -(w as isize), 1, -1] };
        Grid { d, w, off, steps }
    }

    pub fn size(&self) -> usize {
        self.w.pow(self.d as u32)
    }

    pub fn origin(&self) -> usize {
        self.index(Site::origin(self.d).unwrap())
    }

    pub fn index(&self, s: Site) -> usize {
        let x = (s.coord(0) as i64 + self.off) as usize;
        if self.d == 1 {
            x
        } else {
            x * self.w + (s.coord(1) as i64 + self.off) as usize
        }
    }

    pub fn site(&self, i: usize) -> Site {
        if self.d == 1 {
            Site::x((i as i64 - self.off) as i32)
        } else {
            Site::xy((i / self.w) as i64 as i32 - self.off as i32, (i % self.w) as i64 as i32 - self.off as i32)
        }
    }

    #[inline]
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.steps[..2 * self.d].iter().map(move |&s| (i as isize + s) as usize)
    }

    pub fn edge(&self, i: usize, j: usize) -> Edge {
        Edge::new(self.site(i), self.site(j)).unwrap()
    }

    #[inline]
    pub fn edge_key(&self, i: usize, j: usize) -> (usize, usize) {
        (i.min(j), i.max(j))
    }
}

/// A growing set of sites on a grid, with perimeter and interior edge counts
/// maintained incrementally.
#[derive(Clone, Debug)]
pub(crate) struct Cluster<'g> {
    pub grid: &'g Grid,
    pub inside: Vec<bool>,
    pub sites: Vec<usize>,
    pub perimeter: u64,
    pub interior: u64,
}

impl<'g> Cluster<'g> {
    pub fn at_origin(grid: &'g Grid) -> Cluster<'g> {
        let mut c = Cluster { grid, inside: vec![false; grid.size()], sites: Vec::new(), perimeter: 0, interior: 0 };
        c.add(grid.origin());
        c
    }

    #[inline]
    pub fn inside_neighbors(&self, v: usize) -> u64 {
        self.grid.neighbors(v).filter(|&u| self.inside[u]).count() as u64
    }

    /// Perimeter after adding the outside site `v`.
    #[inline]
    pub fn perimeter_with(&self, v: usize) -> u64 {
        self.perimeter + 2 * self.grid.d as u64 - 2 * self.inside_neighbors(v)
    }

    pub fn add(&mut self, v: usize) {
        debug_assert!(!self.inside[v]);
        let k = self.inside_neighbors(v);
        self.perimeter = self.perimeter + 2 * self.grid.d as u64 - 2 * k;
        self.interior += k;
        self.inside[v] = true;
        self.sites.push(v);
    }

    /// Undo the most recent `add`.
    pub fn pop(&mut self) {
        let v = self.sites.pop().unwrap();
        self.inside[v] = false;
        let k = self.inside_neighbors(v);
        self.perimeter = self.perimeter + 2 * k - 2 * self.grid.d as u64;
        self.interior -= k;
    }

    /// Perimeter edges as (inside, outside) index pairs.
    pub fn perimeter_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.perimeter as usize);
        for &u in &self.sites {
            for v in self.grid.neighbors(u) {
                if !self.inside[v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Every edge touching the cluster, as index pairs in canonical edge order.
    pub fn touching_edges_sorted(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &u in &self.sites {
            for v in self.grid.neighbors(u) {
                if !self.inside[v] || u < v {
                    out.push(self.grid.edge_key(u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }
}
