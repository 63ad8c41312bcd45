use std::panic::{catch_unwind, AssertUnwindSafe};

use bptree::heap_tree::DEBUG_EPOCHS_VAR;
use bptree::{Order, Strategy, TreeRoot};

// Own test binary: the variable is read when a tree is created.
#[test]
fn env_var_enables_epoch_checks() {
    std::env::set_var(DEBUG_EPOCHS_VAR, "1");
    let mut tree = TreeRoot::new(Order::new(2).unwrap(), Strategy::Binary);
    assert!(tree.epoch_checks());
    for v in 0..20 {
        tree.insert(v);
    }
    let mut cursor = tree.lrange_cursor(&5);
    assert_eq!(cursor.next(&tree), Some(&5));
    tree.delete(&6);
    let stale = catch_unwind(AssertUnwindSafe(|| {
        cursor.next(&tree);
    }));
    assert!(stale.is_err());

    std::env::set_var(DEBUG_EPOCHS_VAR, "0");
    assert!(!TreeRoot::<i64>::new(Order::new(2).unwrap(), Strategy::Binary).epoch_checks());
}
