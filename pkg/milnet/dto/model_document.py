"""
Model file document

JSON representation of a trained network:

    {
      "format-version": 1,
      "architecture": {"kind", "input_dim", "embed_dim", "pre_hidden", "post_hidden"},
      "pool": "mean" | "max" | "smoothmax",
      "layers": [{"stage", "rows", "cols", "weights" (row-major), "bias", "activation"}],
      "standardizer": {"mean", "scale"} | null
    }

Floats are written with Python's shortest round-trip representation, so
save -> load reproduces every parameter bit for bit.
"""

from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from milnet.domain.enums import Activation, ArchitectureKind, PoolKind
from milnet.domain.errors import MilError, ModelFormatError
from milnet.domain.models import Architecture, Layer, Network, Standardizer
from milnet.dto.base import BaseDTO, ValidationError, get_field, require_field

FORMAT_VERSION = 1

PRE_STAGE = "pre"
POST_STAGE = "post"


def _layer_to_dict(layer: Layer, stage: str) -> Dict[str, Any]:
    return {
        "stage": stage,
        "rows": layer.rows,
        "cols": layer.cols,
        "weights": [float(w) for w in layer.weights.ravel(order="C")],
        "bias": [float(b) for b in layer.bias],
        "activation": layer.activation.value,
    }


def _layer_from_dict(data: Dict[str, Any]) -> Layer:
    rows = int(require_field(data, "rows"))
    cols = int(require_field(data, "cols"))
    weights = np.array(require_field(data, "weights"), dtype=np.float64)
    if weights.size != rows * cols:
        raise ValidationError(f"layer declares {rows}x{cols} weights but holds {weights.size}")
    return Layer(
        weights=weights.reshape(rows, cols),
        bias=require_field(data, "bias"),
        activation=Activation(require_field(data, "activation")),
    )


@dataclass
class ModelDocument(BaseDTO):
    """
    Serializable wrapper around a Network.

    Attributes:
        network: The network to persist
    """
    network: Network

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the model-file JSON object."""
        net = self.network
        arch = net.architecture
        layers: List[Dict[str, Any]] = [_layer_to_dict(layer, PRE_STAGE) for layer in net.pre_layers]
        layers += [_layer_to_dict(layer, POST_STAGE) for layer in net.post_layers]

        standardizer = None
        if net.standardizer is not None:
            standardizer = {
                "mean": [float(v) for v in net.standardizer.mean],
                "scale": [float(v) for v in net.standardizer.scale],
            }

        return {
            "format-version": FORMAT_VERSION,
            "architecture": {
                "kind": arch.kind.value,
                "input_dim": arch.input_dim,
                "embed_dim": arch.embed_dim,
                "pre_hidden": list(arch.pre_hidden),
                "post_hidden": list(arch.post_hidden),
            },
            "pool": net.pool.value,
            "layers": layers,
            "standardizer": standardizer,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ModelDocument':
        """
        Rebuild the network from a model-file JSON object.

        Raises:
            ModelFormatError: If the object is malformed or of another version
        """
        try:
            version = require_field(data, "format-version")
            if version != FORMAT_VERSION:
                raise ModelFormatError(f"unsupported model format version: {version}")

            arch_data = require_field(data, "architecture")
            architecture = Architecture(
                kind=ArchitectureKind(require_field(arch_data, "kind")),
                input_dim=int(require_field(arch_data, "input_dim")),
                embed_dim=int(require_field(arch_data, "embed_dim")),
                pre_hidden=tuple(get_field(arch_data, "pre_hidden", [])),
                post_hidden=tuple(get_field(arch_data, "post_hidden", [])),
            )

            pre_layers, post_layers = [], []
            for layer_data in require_field(data, "layers"):
                stage = require_field(layer_data, "stage")
                if stage == PRE_STAGE:
                    pre_layers.append(_layer_from_dict(layer_data))
                elif stage == POST_STAGE:
                    post_layers.append(_layer_from_dict(layer_data))
                else:
                    raise ValidationError(f"unknown layer stage: {stage}")

            standardizer = None
            std_data = get_field(data, "standardizer")
            if std_data is not None:
                standardizer = Standardizer(
                    mean=require_field(std_data, "mean"),
                    scale=require_field(std_data, "scale"),
                )

            network = Network(
                architecture=architecture,
                pool=PoolKind.parse(require_field(data, "pool")),
                pre_layers=tuple(pre_layers),
                post_layers=tuple(post_layers),
                standardizer=standardizer,
            )
        except ModelFormatError:
            raise
        except (ValidationError, MilError, ValueError, TypeError) as error:
            raise ModelFormatError(f"invalid model file: {error}") from error

        return cls(network=network)
