"""Bagged linear-classifier ensembles with potential-function combiners."""
from .combiners import (
    BagSpec,
    Ensemble,
    OvoModel,
    bag_train,
    combine_ma,
    combine_mv,
    combine_pc,
    combine_pf,
    combine_sm,
    decision_function,
    ovo_predict,
    ovo_train,
    predict,
)
from .core import LabeledDataset, LinearModel, classify, discriminant, dot, norm, project_onto_normal
from .evaluation import GridSpec, MetricSet, cohen_kappa, confusion, grid_search, macro_metrics, micro_metrics
from .geometry import (
    ClassGeometry,
    PotentialParams,
    ZetaParam,
    class_centroid,
    class_potential,
    fit_class_geometry,
    mahalanobis_dc,
    normal_distance_dn,
    pc_discriminant,
    pf_transform,
)
from .linear_classifiers import TrainerConfig, train

__version__ = "0.1.0"
