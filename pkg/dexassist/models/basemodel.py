import json
from typing import TextIO
from typing import Type
from typing import TypeVar

import yaml
from pydantic import BaseModel as _BaseModel
from pydantic import ConfigDict

from dexassist.yaml.recursiveloader import RecursiveLoader

Model = TypeVar("Model", bound="BaseModel")


class BaseModel(_BaseModel):
    """
    Parent class for all dexassist models offering generic functions and
    properties. This `BaseModel` class is derived from `pydantic.BaseModel`.
    Unknown fields are rejected so that typos in configuration files surface
    as validation errors.
    """

    model_config = ConfigDict(
        extra="forbid",
        validate_assignment=True,
    )

    # ----------------------------------------------------------------------- #
    # Class Methods                                                           #
    # ----------------------------------------------------------------------- #

    @classmethod
    def model_validate_yaml(cls: Type[Model], fp: TextIO) -> Model:
        """
        Load model from yaml file object using dexassist.yaml.RecursiveLoader.
        Supports reference to external yaml files using `!use`, `!extend` and
        `!update` tags and angles in degrees using `!deg`.

        Referenced path should always be relative to the file they are
        referenced from.

        Parameters
        ----------
        fp:
            file object structured as a yaml file

        Returns
        -------
        :
            Model instance

        Examples
        --------
        ```yaml
        weights:
          <<: !update weights_common.yaml
          gamma: 200.0
        hand_model: hand21
        solver: !use solver.yaml
        ```
        """
        data = RecursiveLoader.load(fp)
        return cls.model_validate(data)

    def model_dump_yaml(self, *args, **kwargs) -> str:
        kwargs.setdefault("mode", "json")
        return yaml.safe_dump(self.model_dump(*args, **kwargs), sort_keys=False)

    @classmethod
    def model_validate_json_file(cls: Type[Model], fp: TextIO) -> Model:
        """
        Load model from json file object

        Parameters
        ----------
        fp:
            file object structured as a json file

        Returns
        -------
        :
            Model instance
        """
        data = json.load(fp)
        return cls.model_validate(data)
