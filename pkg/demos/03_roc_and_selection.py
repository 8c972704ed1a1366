"""ROC curves with ties, and scoring a biomarker selection against the truth."""
import numpy as np

from qbplab import auc_rank, roc_curve, selection_performance

scores = np.array([3, 3, 2, 2, 2, 1, 1, 0], dtype=float)
labels = np.array([1, 0, 1, 1, 0, 0, 1, 0])
curve = roc_curve(scores, labels)
print("Tied scores move the curve diagonally:")
for f, t in zip(curve.fpr, curve.tpr):
    print(f"  fpr={f:.2f}  tpr={t:.2f}")
print(f"trapezoid AUC {curve.auc:.4f} equals the rank statistic {auc_rank(scores, labels):.4f}")

relevant = np.array([1, 1, 1, 0, 0, 0, 0, 0], bool)
chosen = np.array([1, 1, 0, 1, 0, 0, 0, 0], bool)
rep = selection_performance(chosen, relevant)
print(f"\nselection: sensitivity {rep.sensitivity:.2f}, specificity {rep.specificity:.2f}, "
      f"accuracy {rep.accuracy:.2f}")
