//! Refinable partition of `0..n` in the style of Valmari and Lehtinen.

pub(crate) struct Partition {
    elems: Vec<usize>,
    loc: Vec<usize>,
    set_of: Vec<usize>,
    first: Vec<usize>,
    end: Vec<usize>,
    mid: Vec<usize>,
    touched: Vec<usize>,
}

impl Partition {
    /// Starts with the blocks given by `key` (elements sharing a key share a
    /// block); keys must be `< key_count`.
    pub fn new(n: usize, key_count: usize, key: impl Fn(usize) -> usize) -> Self {
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); key_count];
        for e in 0..n {
            buckets[key(e)].push(e);
        }
        let mut p = Partition {
            elems: Vec::with_capacity(n),
            loc: vec![0; n],
            set_of: vec![0; n],
            first: Vec::new(),
            end: Vec::new(),
            mid: Vec::new(),
            touched: Vec::new(),
        };
        for bucket in buckets.into_iter().filter(|b| !b.is_empty()) {
            let s = p.first.len();
            let start = p.elems.len();
            for e in bucket {
                p.loc[e] = p.elems.len();
                p.set_of[e] = s;
                p.elems.push(e);
            }
            p.first.push(start);
            p.end.push(p.elems.len());
            p.mid.push(start);
        }
        p
    }

    pub fn set_count(&self) -> usize {
        self.first.len()
    }

    pub fn set_of(&self, e: usize) -> usize {
        self.set_of[e]
    }

    pub fn members(&self, s: usize) -> &[usize] {
        &self.elems[self.first[s]..self.end[s]]
    }

    pub fn size(&self, s: usize) -> usize {
        self.end[s] - self.first[s]
    }

    pub fn mark(&mut self, e: usize) {
        let s = self.set_of[e];
        let i = self.loc[e];
        let j = self.mid[s];
        if i < j {
            return;
        }
        self.elems.swap(i, j);
        self.loc[self.elems[i]] = i;
        self.loc[self.elems[j]] = j;
        if self.mid[s] == self.first[s] {
            self.touched.push(s);
        }
        self.mid[s] += 1;
    }

    /// Splits every touched set into its marked and unmarked parts. Returns
    /// `(old, new)` pairs where `new` holds the marked elements.
    pub fn split(&mut self) -> Vec<(usize, usize)> {
        let mut created = Vec::new();
        while let Some(s) = self.touched.pop() {
            let m = self.mid[s];
            if m == self.end[s] {
                self.mid[s] = self.first[s];
                continue;
            }
            let z = self.first.len();
            self.first.push(self.first[s]);
            self.end.push(m);
            self.mid.push(self.first[s]);
            self.first[s] = m;
            self.mid[s] = m;
            for i in self.first[z]..self.end[z] {
                self.set_of[self.elems[i]] = z;
            }
            created.push((s, z));
        }
        created
    }
}
