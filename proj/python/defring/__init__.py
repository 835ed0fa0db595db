"""Python front end to the defring core. Each call returns the report as a dict."""
import json

from ._core import CapExceeded, Refusal, schema_version
from ._core import run as _run

__all__ = ["CapExceeded", "Refusal", "schema_version", "run", "cohomology", "products", "present",
           "pseudo", "oracle", "massey", "check"]


def run(command, **kwargs):
    kwargs = {k: str(v) if k in ("input", "quiver") else v for k, v in kwargs.items()}
    return json.loads(_run(command, **kwargs))


def cohomology(input, dmax=0):
    return run("cohomology", input=input, dmax=dmax)


def products(input, truncate=0, max_arity=0):
    return run("products", input=input, truncate=truncate, max_arity=max_arity)


def present(input, truncate=0, abelian=False, gma=False):
    return run("present", input=input, truncate=truncate, abelian=abelian, gma=gma)


def pseudo(input="", quiver="", truncate=0):
    return run("pseudo", input=input, quiver=quiver, truncate=truncate)


def oracle(input, ring="eps:1", threads=1):
    return run("oracle", input=input, ring=ring, threads=threads)


def massey(input, truncate=0):
    return run("massey", input=input, truncate=truncate)


def check(input, truncate=0):
    return run("check", input=input, truncate=truncate)
