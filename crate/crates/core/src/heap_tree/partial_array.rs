use std::ops::Index;

/// A fixed-capacity buffer with a fill count.
///
/// Only the first `len()` slots are readable. The capacity is set once at
/// construction and every mutating method refuses to go past it, so an array
/// at rest never reports more entries than it can hold.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialArray<E> {
    items: Vec<E>,
    capacity: usize,
}

/// Returned when an operation would push an array past its capacity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Full;

impl<E> PartialArray<E> {
    pub fn new(capacity: usize) -> Self {
        PartialArray {
            items: Vec::with_capacity(capacity),
            capacity,
        }
    }

    /// Wraps `items`, or hands them back if they do not fit.
    pub fn from_vec(capacity: usize, items: Vec<E>) -> Result<Self, Vec<E>> {
        if items.len() > capacity {
            return Err(items);
        }
        let mut items = items;
        items.reserve_exact(capacity - items.len());
        Ok(PartialArray { items, capacity })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.items.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    #[inline]
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.items.len() == self.capacity
    }

    #[inline]
    pub fn get(&self, i: usize) -> Option<&E> {
        self.items.get(i)
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize) -> Option<&mut E> {
        self.items.get_mut(i)
    }

    #[inline]
    pub fn as_slice(&self) -> &[E] {
        &self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, E> {
        self.items.iter()
    }

    pub fn push(&mut self, e: E) -> Result<(), Full> {
        self.insert(self.len(), e)
    }

    pub fn insert(&mut self, i: usize, e: E) -> Result<(), Full> {
        if self.is_full() {
            return Err(Full);
        }
        self.items.insert(i, e);
        Ok(())
    }

    pub fn remove(&mut self, i: usize) -> E {
        self.items.remove(i)
    }

    pub fn pop(&mut self) -> Option<E> {
        self.items.pop()
    }

    /// Appends all of `other`'s entries, leaving it empty.
    pub fn append(&mut self, other: &mut PartialArray<E>) -> Result<(), Full> {
        if self.len() + other.len() > self.capacity {
            return Err(Full);
        }
        self.items.append(&mut other.items);
        Ok(())
    }

    pub fn into_vec(self) -> Vec<E> {
        self.items
    }
}

impl<E> Index<usize> for PartialArray<E> {
    type Output = E;

    fn index(&self, i: usize) -> &E {
        assert!(
            i < self.items.len(),
            "read at {i} beyond fill {}",
            self.items.len()
        );
        &self.items[i]
    }
}

impl<'a, E> IntoIterator for &'a PartialArray<E> {
    type Item = &'a E;
    type IntoIter = std::slice::Iter<'a, E>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_is_fixed() {
        let mut a = PartialArray::new(2);
        a.push(1).unwrap();
        a.push(2).unwrap();
        assert_eq!(a.push(3), Err(Full));
        assert_eq!(a.insert(0, 0), Err(Full));
        assert_eq!(a.as_slice(), &[1, 2]);
        assert_eq!(a.capacity(), 2);
    }

    #[test]
    fn from_vec_rejects_overfill() {
        assert_eq!(PartialArray::from_vec(2, vec![1, 2, 3]), Err(vec![1, 2, 3]));
        let a = PartialArray::from_vec(4, vec![1]).unwrap();
        assert_eq!(a.capacity(), 4);
        assert_eq!(a.get(1), None);
    }

    #[test]
    #[should_panic(expected = "beyond fill")]
    fn reads_past_fill_are_rejected() {
        let a = PartialArray::from_vec(4, vec![1, 2]).unwrap();
        let _ = a[2];
    }

    #[test]
    fn append_respects_capacity() {
        let mut a = PartialArray::from_vec(3, vec![1, 2]).unwrap();
        let mut b = PartialArray::from_vec(3, vec![3, 4]).unwrap();
        assert_eq!(a.append(&mut b), Err(Full));
        b.pop();
        a.append(&mut b).unwrap();
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        assert!(b.is_empty());
    }
}
