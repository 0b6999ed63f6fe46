#!/usr/bin/env python
# -*- coding: utf-8 -*-

__all__ = ['transmon', 'coupled', 'schrieffer_wolff']
