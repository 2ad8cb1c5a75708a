use alqpt_web::{al_curves_json, reconstruct_json, selection_order_json};
use serde_json::Value;

#[test]
fn curves_cover_every_strategy_and_label_count() {
    let v: Value = serde_json::from_str(&al_curves_json(1, 2, 20, 3).unwrap()).unwrap();
    let curves = v.as_array().unwrap();
    assert_eq!(curves.len(), 4);
    for c in curves {
        assert_eq!(c["labels_used"].as_array().unwrap().len(), 4);
        for s in c["mean_similarity"].as_array().unwrap() {
            assert!((0.0..=1.0).contains(&s.as_f64().unwrap()));
        }
    }
}

#[test]
fn orders_are_permutations_with_a_shared_start() {
    let v: Value = serde_json::from_str(&selection_order_json(2, 11).unwrap()).unwrap();
    let orders: Vec<Vec<u64>> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["selected"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect())
        .collect();
    assert_eq!(orders.len(), 2);
    assert_eq!(orders[0][0], orders[1][0]);
    for o in &orders {
        let mut sorted = o.clone();
        sorted.sort();
        assert_eq!(sorted, (0..16).collect::<Vec<_>>());
    }
}

#[test]
fn reconstruction_lowers_the_loss() {
    let v: Value = serde_json::from_str(&reconstruct_json(2, 4, 200, 0.05).unwrap()).unwrap();
    let loss: Vec<f64> = v["loss"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(loss.len(), 21);
    assert!(loss.last().unwrap() < &loss[0]);
    assert_eq!(v["target_abs"].as_array().unwrap().len(), 16);
}

#[test]
fn rejects_large_registers() {
    assert!(al_curves_json(3, 1, 1, 0).is_err());
    assert!(reconstruct_json(0, 1, 1, 0.05).is_err());
}
