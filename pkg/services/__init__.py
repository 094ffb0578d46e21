"""
Services for the Chevalley kernel.

Submodules are imported directly (``services.group``, ``services.interp``);
the models package validates descriptors through them lazily.
"""
