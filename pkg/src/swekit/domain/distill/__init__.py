"""
distill: teacher-student distillation of static word embeddings.
"""

from .similarity import CROSS_LINGUAL, STUDENT, TEACHER, SimilarityMatrix, cosine_matrix, cross_cosine_matrix
from .kd import kd_grad, kd_loss, kd_loss_and_grad, masked_log_softmax, mean_abs_gap, row_distributions
from .teacher import (
    SENT_MAGIC,
    TeacherBatchSource,
    load_teacher,
    read_sentence_embeddings,
    teacher_from_arrays,
    write_sentence_embeddings,
)
from .trainer import similarity_gap, train_kd

__all__ = [
    "CROSS_LINGUAL",
    "STUDENT",
    "TEACHER",
    "SimilarityMatrix",
    "cosine_matrix",
    "cross_cosine_matrix",
    "kd_grad",
    "kd_loss",
    "kd_loss_and_grad",
    "masked_log_softmax",
    "mean_abs_gap",
    "row_distributions",
    "SENT_MAGIC",
    "TeacherBatchSource",
    "load_teacher",
    "read_sentence_embeddings",
    "teacher_from_arrays",
    "write_sentence_embeddings",
    "similarity_gap",
    "train_kd",
]
