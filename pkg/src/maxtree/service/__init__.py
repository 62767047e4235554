"""HTTP service wrapping the core package.

`maxtree.service.app` holds the FastAPI application; `maxtree.service.schemas`
holds the request/response models that double as the wire formats of the CLI.
"""
